#pragma once

#include "aftsynth/galileo.hpp"
#include "aftsynth/polyhedron.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gate_enumeration {

using namespace aftsynth;

struct Event {
  std::size_t child;
  bool success;
};

/// Decision of a gate after the given completions, in order. Returns the
/// outcome once decided, nullopt while pending.
inline std::optional<bool> decide(const GateNode& g, const std::vector<Event>& seen)
{
  std::size_t n = g.children.size();
  std::size_t ok = 0, ko = 0;
  for (const auto& e : seen)
    (e.success ? ok : ko) += 1;
  const Event& last = seen.back();
  switch (g.kind) {
  case GateKind::And:
  case GateKind::Sand:
  case GateKind::Spare:
    if (!last.success)
      return false;
    return ok == n ? std::optional<bool>(true) : std::nullopt;
  case GateKind::Or:
  case GateKind::Sor:
    if (last.success)
      return true;
    return ko == n ? std::optional<bool>(false) : std::nullopt;
  case GateKind::Vot:
    if (ok == g.threshold)
      return true;
    return ko == n - g.threshold + 1 ? std::optional<bool>(false) : std::nullopt;
  case GateKind::Xor:
    if (seen.size() < 2)
      return std::nullopt;
    return seen[0].success != seen[1].success;
  case GateKind::Pand:
    if (!last.success || last.child != seen.size() - 1)
      return false;
    return ok == n ? std::optional<bool>(true) : std::nullopt;
  case GateKind::Fdep:
    return last.success;
  }
  return std::nullopt;
}

inline bool sequential(GateKind k) { return k == GateKind::Sand || k == GateKind::Sor || k == GateKind::Spare; }

/// Success region over total_time, total_cost and total_damage of a concrete
/// tree made of one gate over leaves, built from every completion order and
/// outcome of the leaves and expressed in `target`.
inline std::vector<Polyhedron> success_region(const AttackFaultTree& tree, const UniversePtr& target)
{
  const GateNode* g = tree.gate(tree.root);
  if (!g)
    throw std::invalid_argument("root is not a gate");
  std::size_t n = g->children.size();
  std::vector<const LeafNode*> kids;
  for (const auto& c : g->children) {
    kids.push_back(tree.leaf(c));
    if (!kids.back())
      throw std::invalid_argument("child '" + c + "' is not a leaf");
  }

  auto u = std::make_shared<VariableUniverse>();
  std::vector<VarId> dur;
  for (std::size_t i = 0; i < n; ++i)
    dur.push_back(u->add("d" + std::to_string(i), VarSort::WeightVariable));
  VarId tt = u->add("total_time", VarSort::WeightParameter);
  VarId tc = u->add("total_cost", VarSort::WeightParameter);
  VarId td = u->add("total_damage", VarSort::WeightParameter);

  // completion time of child i: its own duration, or the running sum for sequential gates
  auto completion = [&](std::size_t i) {
    LinearExpr e;
    for (std::size_t j = sequential(g->kind) ? 0 : i; j <= i; ++j)
      e += LinearExpr::var(dur[j]);
    return e;
  };

  std::vector<Polyhedron> out;
  // FDEP: only the trigger runs; dependents are forced, never started on their own
  std::size_t running = g->kind == GateKind::Fdep ? 1 : n;
  for (unsigned outcomes = 0; outcomes < (1U << running); ++outcomes) {
    std::vector<std::size_t> order(running);
    std::iota(order.begin(), order.end(), 0);
    do {
      if (sequential(g->kind) && !std::is_sorted(order.begin(), order.end()))
        continue;
      std::vector<Event> seen;
      std::optional<bool> verdict;
      for (std::size_t i : order) {
        seen.push_back({i, ((outcomes >> i) & 1U) != 0});
        verdict = decide(*g, seen);
        if (verdict)
          break;
      }
      if (!verdict || !*verdict)
        continue;

      Polyhedron p(u);
      std::size_t started = sequential(g->kind) ? seen.size() : running;
      for (std::size_t i = 0; i < started; ++i) {
        p.add(LinearExpr::var(dur[i]), Comparison::GreaterEqual, LinearExpr::value(kids[i]->min_time.value()));
        p.add(LinearExpr::var(dur[i]), Comparison::LessEqual, LinearExpr::value(kids[i]->max_time.value()));
      }
      if (!sequential(g->kind))
        for (std::size_t k = 1; k < order.size(); ++k)
          p.add(completion(order[k - 1]), Comparison::LessEqual, completion(order[k]));
      Rational cost = g->cost.value();
      Rational damage = g->damage.value();
      for (const auto& e : seen)
        if (e.success) {
          cost += kids[e.child]->cost.value();
          damage += kids[e.child]->damage.value();
        }
      if (g->kind == GateKind::Fdep)
        for (std::size_t i = 1; i < n; ++i) {
          cost += kids[i]->cost.value();
          damage += kids[i]->damage.value();
        }
      p.add(LinearExpr::var(tt), Comparison::Equal, completion(seen.back().child));
      p.add(LinearExpr::var(tc), Comparison::Equal, LinearExpr::value(cost));
      p.add(LinearExpr::var(td), Comparison::Equal, LinearExpr::value(damage));
      Polyhedron projected = p.eliminate(dur);
      if (projected.is_empty())
        continue;

      Polyhedron q(target);
      for (const auto& row : projected.constraints()) {
        LinearExpr lhs = LinearExpr::value(Rational(row.constant));
        for (VarId v : {tt, tc, td})
          if (row.coefficients[v] != 0)
            lhs += LinearExpr::var(target->id((*u)[v].name), Rational(row.coefficients[v]));
        Comparison cmp = row.relation == Relation::Equal  ? Comparison::Equal
                         : row.relation == Relation::Less ? Comparison::Less
                                                          : Comparison::LessEqual;
        q.add(lhs, cmp, LinearExpr::value(0));
      }
      out.push_back(q);
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return out;
}

}  // namespace gate_enumeration
