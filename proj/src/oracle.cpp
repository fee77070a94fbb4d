#include "aftsynth/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace aftsynth {

namespace {

struct Window {
  Rational lo;
  Rational hi;
  std::weak_ordering operator<=>(const Window&) const = default;
  bool operator==(const Window&) const = default;
};

/// Finite union of closed intervals, kept sorted and merged.
using TimeSet = std::vector<Window>;

TimeSet normalized(TimeSet s)
{
  std::sort(s.begin(), s.end());
  TimeSet out;
  for (const auto& w : s) {
    if (!out.empty() && w.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, w.hi);
    else
      out.push_back(w);
  }
  return out;
}

TimeSet plus(const TimeSet& a, const TimeSet& b)
{
  TimeSet out;
  for (const auto& x : a)
    for (const auto& y : b)
      out.push_back({x.lo + y.lo, x.hi + y.hi});
  return normalized(std::move(out));
}

TimeSet shifted(const TimeSet& a, const Window& by) { return plus(a, TimeSet{by}); }

/// Instants at which the last of the given events can happen.
TimeSet latest(const std::vector<TimeSet>& sets)
{
  TimeSet out;
  std::vector<Window> pick;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == sets.size()) {
      Window w = pick.front();
      for (const auto& p : pick) {
        w.lo = std::max(w.lo, p.lo);
        w.hi = std::max(w.hi, p.hi);
      }
      out.push_back(w);
      return;
    }
    for (const auto& w : sets[i]) {
      pick.push_back(w);
      go(i + 1);
      pick.pop_back();
    }
  };
  if (!sets.empty())
    go(0);
  return normalized(std::move(out));
}

TimeSet joined(const std::vector<TimeSet>& sets)
{
  TimeSet out;
  for (const auto& s : sets)
    out.insert(out.end(), s.begin(), s.end());
  return normalized(std::move(out));
}

struct Outcomes {
  std::vector<Scenario> success;
  TimeSet fail;
};

std::vector<Scenario> unique(std::vector<Scenario> v)
{
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// All children succeed; `sequential` adds up durations, otherwise the last one decides.
std::vector<Scenario> combine(const std::vector<const std::vector<Scenario>*>& parts, bool sequential)
{
  std::vector<Scenario> out;
  std::vector<const Scenario*> pick;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == parts.size()) {
      Scenario s{0, 0, 0, 0, {}};
      for (const auto* p : pick) {
        s.lo = sequential ? s.lo + p->lo : std::max(s.lo, p->lo);
        s.hi = sequential ? s.hi + p->hi : std::max(s.hi, p->hi);
        s.cost += p->cost;
        s.damage += p->damage;
        s.leaves.insert(p->leaves.begin(), p->leaves.end());
      }
      out.push_back(std::move(s));
      return;
    }
    for (const auto& s : *parts[i]) {
      pick.push_back(&s);
      go(i + 1);
      pick.pop_back();
    }
  };
  go(0);
  return out;
}

/// Index subsets of size k.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k)
{
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = from; i < n; ++i) {
      cur.push_back(i);
      go(i + 1);
      cur.pop_back();
    }
  };
  go(0);
  return out;
}

Rational constant(const AttributeValue& v, const std::string& node)
{
  if (v.is_parameter())
    throw OracleUnsupported("node '" + node + "' has the parametric attribute '" + v.name() + "'");
  return v.value();
}

Outcomes evaluate(const AttackFaultTree& tree, const std::string& name)
{
  if (const auto* leaf = tree.leaf(name)) {
    Rational lo = constant(leaf->min_time, name);
    Rational hi = constant(leaf->max_time, name);
    Scenario s{lo, hi, constant(leaf->cost, name), constant(leaf->damage, name), {name}};
    return {{s}, {{lo, hi}}};
  }
  const GateNode& g = *tree.gate(name);
  if (!oracle_supports(g.kind))
    throw OracleUnsupported(std::string(to_string(g.kind)) + " gate '" + name + "' is not handled bottom-up");
  Rational own_cost = constant(g.cost, name);
  Rational own_damage = constant(g.damage, name);

  std::vector<Outcomes> kids;
  for (const auto& c : g.children)
    kids.push_back(evaluate(tree, c));
  std::size_t n = kids.size();
  std::vector<TimeSet> fails;
  for (const auto& k : kids)
    fails.push_back(k.fail);

  Outcomes out;
  auto all_succeed = [&](const std::vector<std::size_t>& which, bool sequential) {
    std::vector<const std::vector<Scenario>*> parts;
    for (std::size_t i : which)
      parts.push_back(&kids[i].success);
    auto combined = combine(parts, sequential);
    out.success.insert(out.success.end(), combined.begin(), combined.end());
  };
  std::vector<std::size_t> everyone(n);
  for (std::size_t i = 0; i < n; ++i)
    everyone[i] = i;

  switch (g.kind) {
  case GateKind::And:
    all_succeed(everyone, false);
    out.fail = joined(fails);
    break;
  case GateKind::Or:
    for (const auto& k : kids)
      out.success.insert(out.success.end(), k.success.begin(), k.success.end());
    out.fail = latest(fails);
    break;
  case GateKind::Sand: {
    all_succeed(everyone, true);
    // child i fails after its predecessors all succeeded
    TimeSet before{{0, 0}};
    std::vector<TimeSet> ends;
    for (std::size_t i = 0; i < n; ++i) {
      ends.push_back(plus(before, kids[i].fail));
      TimeSet done;
      for (const auto& s : kids[i].success)
        done.push_back({s.lo, s.hi});
      before = plus(before, normalized(done));
    }
    out.fail = joined(ends);
    break;
  }
  case GateKind::Sor: {
    // child j succeeds after all its predecessors failed
    TimeSet before{{0, 0}};
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& s : kids[j].success)
        for (const auto& w : shifted(before, {s.lo, s.hi}))
          out.success.push_back(Scenario{w.lo, w.hi, s.cost, s.damage, s.leaves});
      before = plus(before, kids[j].fail);
    }
    out.fail = before;
    break;
  }
  case GateKind::Vot: {
    std::size_t k = g.threshold;
    for (const auto& which : subsets(n, k))
      all_succeed(which, false);
    std::vector<TimeSet> failing_sets;
    for (const auto& which : subsets(n, n - k + 1)) {
      std::vector<TimeSet> picked;
      for (std::size_t i : which)
        picked.push_back(fails[i]);
      failing_sets.push_back(latest(picked));
    }
    out.fail = joined(failing_sets);
    break;
  }
  default:
    break;
  }
  for (auto& s : out.success) {
    s.cost += own_cost;
    s.damage += own_damage;
  }
  out.success = unique(std::move(out.success));
  return out;
}

}  // namespace

bool oracle_supports(GateKind kind)
{
  return kind == GateKind::And || kind == GateKind::Or || kind == GateKind::Sand || kind == GateKind::Sor ||
         kind == GateKind::Vot;
}

std::vector<Scenario> scenarios(const AttackFaultTree& tree)
{
  auto diagnostics = validate(tree);
  if (!diagnostics.empty())
    throw std::invalid_argument("invalid tree: " + diagnostics.front().message);
  return evaluate(tree, tree.root).success;
}

std::string to_string(const Scenario& s)
{
  std::ostringstream os;
  os << "time [" << to_decimal_string(s.lo) << ", " << to_decimal_string(s.hi) << "], cost "
     << to_decimal_string(s.cost) << ", damage " << to_decimal_string(s.damage) << ", leaves {";
  bool first = true;
  for (const auto& l : s.leaves) {
    os << (first ? "" : ", ") << l;
    first = false;
  }
  os << "}";
  return os.str();
}

namespace {

/// Endpoints and midpoint of a range; unbounded sides are replaced by a step away.
std::vector<Rational> sample(const Interval& range)
{
  Rational lo = range.lower ? range.lower->value : (range.upper ? range.upper->value - 1 : Rational(0));
  Rational hi = range.upper ? range.upper->value : lo + 1;
  std::vector<Rational> out{lo, (lo + hi) / 2, hi};
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

CrosscheckReport crosscheck(const AttackFaultTree& tree, const ConstraintResult& result,
                            const ParameterValuation& fixed)
{
  CrosscheckReport report;
  auto expected = scenarios(tree);
  const auto& u = *result.universe;
  VarId tt = u.id("total_time");
  VarId tc = u.id("total_cost");
  VarId td = u.id("total_damage");
  PointValuation point;
  for (const auto& [name, value] : fixed)
    point[u.id(name)] = value;

  for (const auto& s : expected) {
    for (const auto& t : sample(Interval{Bound{s.lo}, Bound{s.hi}})) {
      ++report.scenario_samples;
      ParameterValuation v = fixed;
      v["total_time"] = t;
      v["total_cost"] = s.cost;
      v["total_damage"] = s.damage;
      if (!check_valuation(result, v))
        report.mismatches.push_back("scenario " + to_string(s) + " at time " + to_decimal_string(t) +
                                    " satisfies no disjunct");
    }
  }

  for (std::size_t i = 0; i < result.disjuncts.size(); ++i) {
    Polyhedron d = result.disjuncts[i].constraint.substitute(point);
    auto time_range = d.bounds(tt);
    if (!time_range)
      continue;
    for (const auto& t : sample(*time_range)) {
      Polyhedron at_t = d.substitute({{tt, t}});
      auto cost_range = at_t.bounds(tc);
      if (!cost_range)
        continue;
      for (const auto& c : sample(*cost_range)) {
        Polyhedron at_tc = at_t.substitute({{tc, c}});
        auto damage_range = at_tc.bounds(td);
        if (!damage_range)
          continue;
        for (const auto& dmg : sample(*damage_range)) {
          if (!d.contains({{tt, t}, {tc, c}, {td, dmg}}))
            continue;
          ++report.disjunct_samples;
          bool explained = std::any_of(expected.begin(), expected.end(), [&](const Scenario& s) {
            return s.lo <= t && t <= s.hi && s.cost == c && s.damage == dmg;
          });
          if (!explained)
            report.mismatches.push_back("disjunct " + std::to_string(i + 1) + " point (time " + to_decimal_string(t) +
                                        ", cost " + to_decimal_string(c) + ", damage " + to_decimal_string(dmg) +
                                        ") matches no scenario");
        }
      }
    }
  }
  return report;
}

}  // namespace aftsynth
