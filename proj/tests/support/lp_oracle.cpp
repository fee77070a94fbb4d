#include "support/lp_oracle.hpp"

#include <algorithm>
#include <optional>

namespace lp_oracle {

namespace {

// a.y <= b
struct Half {
  std::vector<Rational> a;
  Rational b;
};

std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs)
{
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0)
      ++piv;
    if (piv == n)
      return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0)
        continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k)
        m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = rhs[i] / m[i][i];
  return x;
}

bool satisfies(const std::vector<Half>& hs, const std::vector<Rational>& y)
{
  for (const auto& h : hs) {
    Rational s = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
      s += h.a[i] * y[i];
    if (s > h.b)
      return false;
  }
  return true;
}

}  // namespace

bool feasible(const std::vector<Row>& rows, std::size_t n, const Rational& box)
{
  const std::size_t dim = n + 1;  // last column is the slack t
  bool any_strict = false;
  std::vector<Half> hs;
  for (const auto& r : rows) {
    Half h;
    h.a = r.a;
    h.a.resize(dim);
    h.b = -r.c;
    if (r.relation == aftsynth::Relation::Less) {
      h.a[n] = 1;
      any_strict = true;
    }
    if (r.relation == aftsynth::Relation::Equal) {
      Half g;
      g.a.resize(dim);
      for (std::size_t i = 0; i < n; ++i)
        g.a[i] = -h.a[i];
      g.b = -h.b;
      hs.push_back(std::move(g));
    }
    hs.push_back(std::move(h));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    Half up, lo;
    up.a.assign(dim, 0);
    lo.a.assign(dim, 0);
    up.a[i] = 1;
    lo.a[i] = -1;
    up.b = i == n ? Rational(1) : box;
    lo.b = i == n ? Rational(0) : box;
    hs.push_back(std::move(up));
    hs.push_back(std::move(lo));
  }

  std::optional<Rational> best;
  std::vector<std::size_t> pick(dim);
  const std::size_t m = hs.size();
  auto visit = [&](auto& self, std::size_t depth, std::size_t from) -> bool {
    if (depth == dim) {
      std::vector<std::vector<Rational>> mat(dim);
      std::vector<Rational> rhs(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        mat[i] = hs[pick[i]].a;
        rhs[i] = hs[pick[i]].b;
      }
      auto y = solve(std::move(mat), std::move(rhs));
      if (!y || !satisfies(hs, *y))
        return false;
      if (!best || (*y)[n] > *best)
        best = (*y)[n];
      return !any_strict || *best > 0;
    }
    for (std::size_t i = from; i < m; ++i) {
      pick[depth] = i;
      if (self(self, depth + 1, i + 1))
        return true;
    }
    return false;
  };
  visit(visit, 0, 0);
  if (!best)
    return false;
  return !any_strict || *best > 0;
}

bool extends(const aftsynth::Polyhedron& p, const aftsynth::PointValuation& fixed)
{
  const auto& u = *p.universe();
  std::vector<aftsynth::VarId> free;
  for (aftsynth::VarId v = 0; v < u.size(); ++v)
    if (!fixed.contains(v))
      free.push_back(v);
  std::vector<Row> rows;
  for (const auto& r : p.constraints()) {
    Row out;
    out.c = Rational(r.constant);
    out.relation = r.relation;
    out.a.assign(free.size(), 0);
    for (aftsynth::VarId v = 0; v < u.size(); ++v) {
      if (r.coefficients[v] == 0)
        continue;
      if (auto it = fixed.find(v); it != fixed.end())
        out.c += Rational(r.coefficients[v]) * it->second;
      else
        out.a[static_cast<std::size_t>(std::find(free.begin(), free.end(), v) - free.begin())] =
            Rational(r.coefficients[v]);
    }
    rows.push_back(std::move(out));
  }
  if (p.constraints().empty())
    return !p.is_empty();
  return feasible(rows, free.size());
}

}  // namespace lp_oracle
