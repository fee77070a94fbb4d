#include "aftsynth/polyhedron.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <tuple>

namespace aftsynth {

using Row = AffineInequality;

std::string_view to_string(VarSort sort)
{
  switch (sort) {
  case VarSort::Clock:
    return "clock";
  case VarSort::TimingParameter:
    return "timing-parameter";
  case VarSort::WeightVariable:
    return "weight-variable";
  case VarSort::WeightParameter:
    return "weight-parameter";
  }
  return "?";
}

std::string_view to_string(Comparison cmp)
{
  switch (cmp) {
  case Comparison::Less:
    return "<";
  case Comparison::LessEqual:
    return "<=";
  case Comparison::Equal:
    return "=";
  case Comparison::GreaterEqual:
    return ">=";
  case Comparison::Greater:
    return ">";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// VariableUniverse

VarId VariableUniverse::add(std::string name, VarSort sort)
{
  if (index_.contains(name))
    throw std::invalid_argument("duplicate variable '" + name + "'");
  VarId id = vars_.size();
  index_.emplace(name, id);
  vars_.push_back(Variable{std::move(name), sort});
  return id;
}

std::optional<VarId> VariableUniverse::find(std::string_view name) const
{
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

VarId VariableUniverse::id(std::string_view name) const
{
  if (auto id = find(name))
    return *id;
  throw std::out_of_range("unknown variable '" + std::string(name) + "'");
}

std::vector<VarId> VariableUniverse::of_sort(VarSort sort) const
{
  std::vector<VarId> out;
  for (VarId i = 0; i < vars_.size(); ++i)
    if (vars_[i].sort == sort)
      out.push_back(i);
  return out;
}

bool VariableUniverse::is_parameter(VarId id) const
{
  auto sort = vars_.at(id).sort;
  return sort == VarSort::TimingParameter || sort == VarSort::WeightParameter;
}

// ---------------------------------------------------------------------------
// LinearExpr

LinearExpr LinearExpr::var(VarId id, const Rational& coefficient)
{
  LinearExpr e;
  if (coefficient != 0)
    e.terms.emplace(id, coefficient);
  return e;
}

LinearExpr LinearExpr::value(const Rational& constant)
{
  LinearExpr e;
  e.constant = constant;
  return e;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other)
{
  for (const auto& [id, k] : other.terms) {
    Rational& slot = terms[id];
    slot += k;
    if (slot == 0)
      terms.erase(id);
  }
  constant += other.constant;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other)
{
  LinearExpr negated = other;
  negated *= -1;
  return *this += negated;
}

LinearExpr& LinearExpr::operator*=(const Rational& factor)
{
  if (factor == 0) {
    terms.clear();
    constant = 0;
    return *this;
  }
  for (auto& [id, k] : terms)
    k *= factor;
  constant *= factor;
  return *this;
}

// ---------------------------------------------------------------------------
// Rows

AffineInequality AffineInequality::make(std::size_t width, const LinearExpr& lhs, Comparison cmp,
                                        const LinearExpr& rhs)
{
  LinearExpr e = lhs - rhs;
  Relation rel = Relation::LessEqual;
  switch (cmp) {
  case Comparison::Less:
    rel = Relation::Less;
    break;
  case Comparison::LessEqual:
    rel = Relation::LessEqual;
    break;
  case Comparison::Equal:
    rel = Relation::Equal;
    break;
  case Comparison::GreaterEqual:
    e *= -1;
    rel = Relation::LessEqual;
    break;
  case Comparison::Greater:
    e *= -1;
    rel = Relation::Less;
    break;
  }

  Integer scale = e.constant.get_den();
  for (const auto& [id, k] : e.terms) {
    if (id >= width)
      throw std::out_of_range("variable index outside of the universe");
    scale = lcm(scale, k.get_den());
  }

  AffineInequality row;
  row.coefficients.assign(width, Integer(0));
  for (const auto& [id, k] : e.terms)
    row.coefficients[id] = k.get_num() * (scale / k.get_den());
  row.constant = e.constant.get_num() * (scale / e.constant.get_den());
  row.relation = rel;
  return row;
}

bool AffineInequality::is_constant() const
{
  return std::all_of(coefficients.begin(), coefficients.end(), [](const Integer& a) { return a == 0; });
}

namespace {

enum class RowStatus { Normal, Tautology, Contradiction };

Integer coefficient_gcd(const Row& r)
{
  Integer g = 0;
  for (const auto& a : r.coefficients)
    if (a != 0)
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  return g;
}

RowStatus normalize_row(Row& r)
{
  Integer g = coefficient_gcd(r);
  if (g == 0) {
    int s = sgn(r.constant);
    bool holds = r.relation == Relation::LessEqual ? s <= 0 : r.relation == Relation::Less ? s < 0 : s == 0;
    return holds ? RowStatus::Tautology : RowStatus::Contradiction;
  }
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r.constant.get_mpz_t());
  if (g != 1) {
    for (auto& a : r.coefficients)
      if (a != 0)
        mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(r.constant.get_mpz_t(), r.constant.get_mpz_t(), g.get_mpz_t());
  }
  if (r.relation == Relation::Equal) {
    auto lead = std::find_if(r.coefficients.begin(), r.coefficients.end(), [](const Integer& a) { return a != 0; });
    if (*lead < 0) {
      for (auto& a : r.coefficients)
        a = -a;
      r.constant = -r.constant;
    }
  }
  return RowStatus::Normal;
}

int leading_sign(const std::vector<Integer>& key)
{
  for (const auto& a : key)
    if (a != 0)
      return sgn(a);
  return 0;
}

std::vector<Integer> negated(const std::vector<Integer>& key)
{
  std::vector<Integer> out(key.size());
  for (std::size_t i = 0; i < key.size(); ++i)
    out[i] = -key[i];
  return out;
}

Row row_from(const std::vector<Integer>& direction, const Rational& bound, Relation rel)
{
  Row r;
  r.coefficients.resize(direction.size());
  const Integer& den = bound.get_den();
  for (std::size_t i = 0; i < direction.size(); ++i)
    r.coefficients[i] = direction[i] * den;
  r.constant = bound.get_num();
  r.relation = rel;
  return r;
}

// Normalizes every row, drops tautologies and rows dominated by a parallel
// row, fuses opposite non-strict pairs into equalities. Returns false when a
// contradiction was detected syntactically.
bool normalize_system(std::vector<Row>& rows)
{
  struct Ineq {
    Rational bound;
    bool strict;
  };
  std::map<std::vector<Integer>, Ineq> ineqs;
  std::map<std::vector<Integer>, Rational> eqs;

  for (auto& r : rows) {
    auto status = normalize_row(r);
    if (status == RowStatus::Tautology)
      continue;
    if (status == RowStatus::Contradiction)
      return false;

    Integer g = coefficient_gcd(r);
    std::vector<Integer> key(r.coefficients.size());
    for (std::size_t i = 0; i < key.size(); ++i)
      if (r.coefficients[i] != 0)
        mpz_divexact(key[i].get_mpz_t(), r.coefficients[i].get_mpz_t(), g.get_mpz_t());
    Rational bound(r.constant, g);
    bound.canonicalize();

    if (r.relation == Relation::Equal) {
      auto [it, inserted] = eqs.emplace(std::move(key), bound);
      if (!inserted && it->second != bound)
        return false;
      continue;
    }
    bool strict = r.relation == Relation::Less;
    auto it = ineqs.find(key);
    if (it == ineqs.end())
      ineqs.emplace(std::move(key), Ineq{bound, strict});
    else if (bound > it->second.bound)
      it->second = Ineq{bound, strict};
    else if (bound == it->second.bound && strict)
      it->second.strict = true;
  }

  // Inequalities parallel to an equality are decided by it.
  for (const auto& [key, eq_bound] : eqs) {
    if (auto it = ineqs.find(key); it != ineqs.end()) {
      Rational v = it->second.bound - eq_bound;
      if (v > 0 || (v == 0 && it->second.strict))
        return false;
      ineqs.erase(it);
    }
    if (auto it = ineqs.find(negated(key)); it != ineqs.end()) {
      Rational v = it->second.bound + eq_bound;
      if (v > 0 || (v == 0 && it->second.strict))
        return false;
      ineqs.erase(it);
    }
  }

  std::vector<std::pair<std::vector<Integer>, Rational>> fused;
  for (auto it = ineqs.begin(); it != ineqs.end();) {
    if (leading_sign(it->first) < 0) {
      ++it;
      continue;
    }
    auto jt = ineqs.find(negated(it->first));
    if (jt == ineqs.end()) {
      ++it;
      continue;
    }
    // k.x <= -b1 and k.x >= b2
    Rational gap = -it->second.bound - jt->second.bound;
    bool strict = it->second.strict || jt->second.strict;
    if (gap < 0 || (gap == 0 && strict))
      return false;
    if (gap == 0) {
      fused.emplace_back(it->first, it->second.bound);
      ineqs.erase(jt);
      it = ineqs.erase(it);
      continue;
    }
    ++it;
  }

  rows.clear();
  rows.reserve(eqs.size() + fused.size() + ineqs.size());
  for (const auto& [key, bound] : eqs)
    rows.push_back(row_from(key, bound, Relation::Equal));
  for (const auto& [key, bound] : fused)
    rows.push_back(row_from(key, bound, Relation::Equal));
  for (const auto& [key, ineq] : ineqs)
    rows.push_back(row_from(key, ineq.bound, ineq.strict ? Relation::Less : Relation::LessEqual));
  return true;
}

// Fourier-Motzkin step on column j; equalities are used as substitutions.
bool eliminate_column(std::vector<Row>& rows, std::size_t j)
{
  std::optional<std::size_t> pivot;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    if (r.relation != Relation::Equal || r.coefficients[j] == 0)
      continue;
    auto nz = static_cast<std::size_t>(
        std::count_if(r.coefficients.begin(), r.coefficients.end(), [](const Integer& a) { return a != 0; }));
    if (nz < best) {
      best = nz;
      pivot = i;
    }
  }

  const std::size_t width = rows.empty() ? 0 : rows.front().coefficients.size();

  if (pivot) {
    Row e = std::move(rows[*pivot]);
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(*pivot));
    Integer m1 = abs(e.coefficients[j]);
    for (auto& r : rows) {
      if (r.coefficients[j] == 0)
        continue;
      Integer m2 = e.coefficients[j] > 0 ? Integer(-r.coefficients[j]) : Integer(r.coefficients[j]);
      for (std::size_t k = 0; k < width; ++k)
        r.coefficients[k] = m1 * r.coefficients[k] + m2 * e.coefficients[k];
      r.constant = m1 * r.constant + m2 * e.constant;
    }
    return normalize_system(rows);
  }

  std::vector<Row> pos, neg, out;
  for (auto& r : rows) {
    int s = sgn(r.coefficients[j]);
    if (s > 0)
      pos.push_back(std::move(r));
    else if (s < 0)
      neg.push_back(std::move(r));
    else
      out.push_back(std::move(r));
  }
  out.reserve(out.size() + pos.size() * neg.size());
  for (const auto& p : pos) {
    for (const auto& n : neg) {
      Integer m1 = -n.coefficients[j];
      const Integer& m2 = p.coefficients[j];
      Row r;
      r.coefficients.resize(width);
      for (std::size_t k = 0; k < width; ++k)
        r.coefficients[k] = m1 * p.coefficients[k] + m2 * n.coefficients[k];
      r.constant = m1 * p.constant + m2 * n.constant;
      r.relation = (p.relation == Relation::Less || n.relation == Relation::Less) ? Relation::Less
                                                                                   : Relation::LessEqual;
      out.push_back(std::move(r));
    }
  }
  rows = std::move(out);
  return normalize_system(rows);
}

// Picks the cheapest column to eliminate next: substitutions first, then
// one-sided columns, then the smallest FM product.
std::optional<std::size_t> pick_column(const std::vector<Row>& rows, std::span<const std::size_t> candidates)
{
  std::optional<std::size_t> best;
  long long best_score = std::numeric_limits<long long>::max();
  for (std::size_t j : candidates) {
    long long pos = 0, neg = 0;
    bool in_eq = false;
    for (const auto& r : rows) {
      int s = sgn(r.coefficients[j]);
      if (s == 0)
        continue;
      if (r.relation == Relation::Equal)
        in_eq = true;
      else if (s > 0)
        ++pos;
      else
        ++neg;
    }
    if (!in_eq && pos == 0 && neg == 0)
      continue;
    long long score = in_eq ? -2 : (pos == 0 || neg == 0) ? -1 : pos * neg - pos - neg;
    if (score < best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

bool eliminate_columns(std::vector<Row>& rows, std::vector<std::size_t> columns)
{
  while (!columns.empty()) {
    auto j = pick_column(rows, columns);
    if (!j)
      return true;
    if (!eliminate_column(rows, *j))
      return false;
    columns.erase(std::find(columns.begin(), columns.end(), *j));
  }
  return true;
}

bool system_is_empty(std::vector<Row> rows)
{
  if (!normalize_system(rows))
    return true;
  if (rows.empty())
    return false;
  std::vector<std::size_t> all(rows.front().coefficients.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    all[i] = i;
  if (!eliminate_columns(rows, std::move(all)))
    return true;
  return false;
}

Row negate_strict(const Row& r)
{
  // not(e <= 0) is -e < 0; not(e < 0) is -e <= 0
  Row out = r;
  for (auto& a : out.coefficients)
    a = -a;
  out.constant = -out.constant;
  out.relation = r.relation == Relation::LessEqual ? Relation::Less : Relation::LessEqual;
  return out;
}

bool entails(const std::vector<Row>& rows, const Row& r)
{
  auto violated = [&](Row negation) {
    std::vector<Row> sys = rows;
    sys.push_back(std::move(negation));
    return system_is_empty(std::move(sys));
  };
  if (std::find(rows.begin(), rows.end(), r) != rows.end())
    return true;
  if (r.relation != Relation::Equal)
    return violated(negate_strict(r));
  Row le = r;
  le.relation = Relation::LessEqual;
  Row ge = le;
  for (auto& a : ge.coefficients)
    a = -a;
  ge.constant = -ge.constant;
  return violated(negate_strict(le)) && violated(negate_strict(ge));
}

}  // namespace

// ---------------------------------------------------------------------------
// Polyhedron

Polyhedron::Polyhedron(UniversePtr universe) : universe_(std::move(universe))
{
  if (!universe_)
    throw std::invalid_argument("polyhedron needs a universe");
}

Polyhedron Polyhedron::bottom(UniversePtr universe)
{
  Polyhedron p(std::move(universe));
  p.known_empty_ = true;
  p.empty_cache_ = true;
  return p;
}

void Polyhedron::set_rows(std::vector<AffineInequality> rows)
{
  empty_cache_.reset();
  if (!normalize_system(rows)) {
    rows_.clear();
    known_empty_ = true;
    empty_cache_ = true;
    return;
  }
  rows_ = std::move(rows);
  known_empty_ = false;
}

Polyhedron& Polyhedron::add(AffineInequality row)
{
  if (row.coefficients.size() != width())
    throw std::invalid_argument("row width does not match the universe");
  if (known_empty_)
    return *this;
  auto rows = rows_;
  rows.push_back(std::move(row));
  set_rows(std::move(rows));
  return *this;
}

Polyhedron& Polyhedron::add(const LinearExpr& lhs, Comparison cmp, const LinearExpr& rhs)
{
  return add(AffineInequality::make(width(), lhs, cmp, rhs));
}

void Polyhedron::check_universe(const Polyhedron& other) const
{
  if (universe_ != other.universe_ && universe_->size() != other.universe_->size())
    throw UniverseMismatch();
  if (universe_ != other.universe_) {
    for (VarId i = 0; i < universe_->size(); ++i)
      if ((*universe_)[i].name != (*other.universe_)[i].name)
        throw UniverseMismatch();
  }
}

bool Polyhedron::is_empty() const
{
  if (known_empty_)
    return true;
  if (!empty_cache_)
    empty_cache_ = system_is_empty(rows_);
  return *empty_cache_;
}

Polyhedron Polyhedron::intersect(const Polyhedron& other) const
{
  check_universe(other);
  if (known_empty_ || other.known_empty_)
    return bottom(universe_);
  if (other.rows_.empty())
    return *this;
  if (rows_.empty())
    return other;
  Polyhedron out(universe_);
  auto rows = rows_;
  rows.insert(rows.end(), other.rows_.begin(), other.rows_.end());
  out.set_rows(std::move(rows));
  return out;
}

Polyhedron Polyhedron::eliminate(std::span<const VarId> vars) const
{
  if (known_empty_)
    return *this;
  std::vector<std::size_t> columns;
  for (VarId v : vars) {
    if (v >= width())
      throw std::out_of_range("variable index outside of the universe");
    if (std::find(columns.begin(), columns.end(), v) == columns.end())
      columns.push_back(v);
  }
  auto rows = rows_;
  if (!eliminate_columns(rows, std::move(columns)))
    return bottom(universe_);
  Polyhedron out(universe_);
  out.rows_ = std::move(rows);
  return out;
}

Polyhedron Polyhedron::time_elapse(const Polyhedron& invariant) const
{
  check_universe(invariant);
  if (known_empty_)
    return *this;
  const std::size_t n = width();
  std::vector<bool> is_clock(n);
  for (VarId i = 0; i < n; ++i)
    is_clock[i] = (*universe_)[i].sort == VarSort::Clock;

  // Column n holds the elapsed delay d; x = x0 + d becomes x0 = x - d.
  std::vector<Row> rows;
  rows.reserve(rows_.size() + 1);
  for (const auto& r : rows_) {
    Row e = r;
    Integer s = 0;
    for (VarId i = 0; i < n; ++i)
      if (is_clock[i])
        s += r.coefficients[i];
    e.coefficients.push_back(-s);
    rows.push_back(std::move(e));
  }
  Row nonneg;
  nonneg.coefficients.assign(n + 1, Integer(0));
  nonneg.coefficients[n] = -1;
  nonneg.constant = 0;
  nonneg.relation = Relation::LessEqual;
  rows.push_back(std::move(nonneg));

  if (!normalize_system(rows) || !eliminate_column(rows, n))
    return bottom(universe_);
  for (auto& r : rows)
    r.coefficients.pop_back();
  Polyhedron out(universe_);
  out.set_rows(std::move(rows));
  return out.intersect(invariant);
}

Polyhedron Polyhedron::reset(std::span<const VarId> clocks) const
{
  if (known_empty_)
    return *this;
  for (VarId c : clocks)
    if (c >= width() || (*universe_)[c].sort != VarSort::Clock)
      throw std::invalid_argument("reset of a non-clock variable");
  Polyhedron out = eliminate(clocks);
  if (out.known_empty_)
    return out;
  auto rows = out.rows_;
  for (VarId c : clocks) {
    Row r;
    r.coefficients.assign(width(), Integer(0));
    r.coefficients[c] = 1;
    r.constant = 0;
    r.relation = Relation::Equal;
    rows.push_back(std::move(r));
  }
  out.set_rows(std::move(rows));
  return out;
}

Polyhedron Polyhedron::affine_image(const std::vector<std::pair<VarId, LinearExpr>>& assignments) const
{
  if (known_empty_ || assignments.empty())
    return *this;
  const std::size_t n = width();
  const std::size_t k = assignments.size();
  auto weight_sorted = [&](VarId v) {
    auto sort = (*universe_)[v].sort;
    return sort == VarSort::WeightVariable || sort == VarSort::WeightParameter;
  };
  std::vector<std::size_t> targets;
  for (const auto& [target, expr] : assignments) {
    if (target >= n)
      throw std::out_of_range("variable index outside of the universe");
    if ((*universe_)[target].sort != VarSort::WeightVariable)
      throw std::invalid_argument("assignment target '" + (*universe_)[target].name + "' is not a weight variable");
    for (const auto& [v, coefficient] : expr.terms) {
      if (v >= n)
        throw std::out_of_range("variable index outside of the universe");
      if (!weight_sorted(v))
        throw std::invalid_argument("ill-sorted update expression over '" + (*universe_)[v].name + "'");
    }
    if (std::find(targets.begin(), targets.end(), target) != targets.end())
      throw std::invalid_argument("variable '" + (*universe_)[target].name + "' assigned twice");
    targets.push_back(target);
  }

  std::vector<Row> rows;
  rows.reserve(rows_.size() + k);
  for (const auto& r : rows_) {
    Row e = r;
    e.coefficients.resize(n + k, Integer(0));
    rows.push_back(std::move(e));
  }
  for (std::size_t t = 0; t < k; ++t) {
    // w'_t - expr = 0
    const LinearExpr& expr = assignments[t].second;
    Integer scale = expr.constant.get_den();
    for (const auto& [v, coefficient] : expr.terms)
      scale = lcm(scale, coefficient.get_den());
    Row r;
    r.coefficients.assign(n + k, Integer(0));
    r.coefficients[n + t] = scale;
    for (const auto& [v, coefficient] : expr.terms)
      r.coefficients[v] = -coefficient.get_num() * (scale / coefficient.get_den());
    r.constant = -expr.constant.get_num() * (scale / expr.constant.get_den());
    r.relation = Relation::Equal;
    rows.push_back(std::move(r));
  }

  if (!normalize_system(rows) || !eliminate_columns(rows, targets))
    return bottom(universe_);
  for (auto& r : rows) {
    for (std::size_t t = 0; t < k; ++t)
      r.coefficients[targets[t]] = std::move(r.coefficients[n + t]);
    r.coefficients.resize(n);
  }
  Polyhedron out(universe_);
  out.set_rows(std::move(rows));
  return out;
}

bool Polyhedron::includes(const Polyhedron& other) const
{
  check_universe(other);
  if (other.is_empty())
    return true;
  if (known_empty_)
    return false;
  for (const auto& r : rows_)
    if (!entails(other.rows_, r))
      return false;
  return true;
}

std::vector<Polyhedron> Polyhedron::difference(const Polyhedron& other) const
{
  check_universe(other);
  if (is_empty())
    return {};
  if (other.is_empty())
    return {*this};
  std::vector<Polyhedron> out;
  Polyhedron rest = *this;
  auto keep = [&](Polyhedron piece) {
    if (!piece.is_empty())
      out.push_back(std::move(piece));
  };
  for (const auto& r : other.minimized().rows_) {
    if (r.relation == Relation::Equal) {
      Row lt = r;
      lt.relation = Relation::Less;
      keep(Polyhedron(rest).add(lt));
      Row gt = lt;
      for (auto& a : gt.coefficients)
        a = -a;
      gt.constant = -gt.constant;
      keep(Polyhedron(rest).add(gt));
    }
    else {
      keep(Polyhedron(rest).add(negate_strict(r)));
    }
    rest.add(r);
    if (rest.is_empty())
      break;
  }
  return out;
}

bool covered_by(const Polyhedron& p, std::span<const Polyhedron> pieces)
{
  if (p.is_empty())
    return true;
  if (pieces.empty())
    return false;
  const Polyhedron& first = pieces.front();
  if (first.includes(p))
    return true;
  auto rest = pieces.subspan(1);
  if (first.intersect(p).is_empty())
    return covered_by(p, rest);
  for (const auto& piece : p.difference(first))
    if (!covered_by(piece, rest))
      return false;
  return true;
}

bool same_union(std::span<const Polyhedron> a, std::span<const Polyhedron> b)
{
  for (const auto& p : a)
    if (!covered_by(p, b))
      return false;
  for (const auto& p : b)
    if (!covered_by(p, a))
      return false;
  return true;
}

Polyhedron Polyhedron::substitute(const PointValuation& values) const
{
  if (known_empty_)
    return *this;
  std::vector<Row> rows;
  rows.reserve(rows_.size());
  for (const auto& r : rows_) {
    Rational c = r.constant;
    Row e = r;
    for (const auto& [v, value] : values) {
      if (v >= width())
        throw std::out_of_range("variable index outside of the universe");
      if (e.coefficients[v] == 0)
        continue;
      c += Rational(e.coefficients[v]) * value;
      e.coefficients[v] = 0;
    }
    c.canonicalize();
    const Integer& den = c.get_den();
    if (den != 1)
      for (auto& a : e.coefficients)
        a *= den;
    e.constant = c.get_num();
    rows.push_back(std::move(e));
  }
  Polyhedron out(universe_);
  out.set_rows(std::move(rows));
  return out;
}

bool Polyhedron::contains(const PointValuation& point) const
{
  if (known_empty_)
    return false;
  for (const auto& r : rows_) {
    Rational sum = r.constant;
    for (VarId i = 0; i < r.coefficients.size(); ++i) {
      if (r.coefficients[i] == 0)
        continue;
      auto it = point.find(i);
      if (it == point.end())
        throw std::out_of_range("point does not value '" + (*universe_)[i].name + "'");
      sum += Rational(r.coefficients[i]) * it->second;
    }
    int s = sgn(sum);
    bool holds = r.relation == Relation::LessEqual ? s <= 0 : r.relation == Relation::Less ? s < 0 : s == 0;
    if (!holds)
      return false;
  }
  return true;
}

std::optional<Interval> Polyhedron::bounds(VarId var) const
{
  if (var >= width())
    throw std::out_of_range("variable index outside of the universe");
  std::vector<VarId> others;
  for (VarId v : support())
    if (v != var)
      others.push_back(v);
  Polyhedron projected = eliminate(others);
  if (projected.is_empty())
    return std::nullopt;
  Interval out;
  for (const auto& r : projected.rows_) {
    const Integer& a = r.coefficients[var];
    if (a == 0)
      continue;
    // a*v + c REL 0  =>  v REL' -c/a
    Rational value(-r.constant, a);
    value.canonicalize();
    Bound b{value, r.relation == Relation::Less};
    if (r.relation == Relation::Equal) {
      out.lower = b;
      out.upper = b;
      break;
    }
    if (a > 0)
      out.upper = b;
    else
      out.lower = b;
  }
  return out;
}

Polyhedron Polyhedron::minimized() const
{
  if (is_empty())
    return bottom(universe_);
  std::vector<Row> rows = rows_;
  for (std::size_t i = rows.size(); i-- > 0;) {
    std::vector<Row> rest = rows;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (entails(rest, rows[i]))
      rows = std::move(rest);
  }
  Polyhedron out(universe_);
  out.rows_ = std::move(rows);
  return out;
}

std::vector<VarId> Polyhedron::support() const
{
  std::vector<VarId> out;
  for (VarId i = 0; i < width(); ++i)
    for (const auto& r : rows_)
      if (r.coefficients[i] != 0) {
        out.push_back(i);
        break;
      }
  return out;
}

OrientedRow orient(const AffineInequality& row)
{
  OrientedRow out;
  bool flip = false;
  for (const auto& a : row.coefficients)
    if (a != 0) {
      flip = a < 0;
      break;
    }
  for (VarId i = 0; i < row.coefficients.size(); ++i)
    if (row.coefficients[i] != 0)
      out.terms.emplace_back(i, flip ? Integer(-row.coefficients[i]) : row.coefficients[i]);
  out.rhs = flip ? row.constant : Integer(-row.constant);
  switch (row.relation) {
  case Relation::Equal:
    out.comparison = Comparison::Equal;
    break;
  case Relation::LessEqual:
    out.comparison = flip ? Comparison::GreaterEqual : Comparison::LessEqual;
    break;
  case Relation::Less:
    out.comparison = flip ? Comparison::Greater : Comparison::Less;
    break;
  }
  return out;
}

std::string Polyhedron::row_to_string(const AffineInequality& row) const
{
  OrientedRow o = orient(row);
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, a] : o.terms) {
    Integer mag = abs(a);
    if (first)
      os << (a < 0 ? "-" : "");
    else
      os << (a < 0 ? " - " : " + ");
    if (mag != 1)
      os << mag.get_str() << "*";
    os << (*universe_)[v].name;
    first = false;
  }
  if (first)
    os << "0";
  os << " " << aftsynth::to_string(o.comparison) << " " << o.rhs.get_str();
  return os.str();
}

std::string Polyhedron::to_string() const
{
  if (known_empty_)
    return "false";
  if (rows_.empty())
    return "true";
  // equalities first, then lower bounds before upper bounds of the same leading variable
  std::vector<std::tuple<VarId, int, std::string>> parts;
  for (const auto& r : rows_) {
    VarId lead = 0;
    while (lead < r.coefficients.size() && r.coefficients[lead] == 0)
      ++lead;
    auto cmp = orient(r).comparison;
    int rank = cmp == Comparison::Equal ? 0 : (cmp == Comparison::GreaterEqual || cmp == Comparison::Greater) ? 1 : 2;
    parts.emplace_back(lead, rank, row_to_string(r));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& [lead, rank, text] : parts) {
    if (!out.empty())
      out += " & ";
    out += text;
  }
  return out;
}

}  // namespace aftsynth
