#include "aftsynth/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <thread>

namespace aftsynth {

SymbolicSemantics::SymbolicSemantics(const Network& net) : net_(net)
{
  for (const auto& a : net.automata()) {
    auto& inv = invariants_.emplace_back();
    for (const auto& loc : a.locations())
      inv.push_back(to_polyhedron(loc.invariant, net.universe()));
    auto& g = guards_.emplace_back();
    for (const auto& e : a.edges())
      g.push_back(to_polyhedron(e.guard, net.universe()));
  }
  // fill the emptiness caches now, the polyhedra are shared between workers
  for (const auto* group : {&invariants_, &guards_})
    for (const auto& row : *group)
      for (const auto& p : row)
        p.is_empty();
}

Polyhedron SymbolicSemantics::invariant(const std::vector<LocId>& locations) const
{
  Polyhedron p(net_.universe());
  for (std::size_t i = 0; i < locations.size(); ++i) {
    const Polyhedron& inv = invariants_[i][locations[i]];
    if (!inv.is_top())
      p = p.intersect(inv);
  }
  return p;
}

bool SymbolicSemantics::urgent(const std::vector<LocId>& locations) const
{
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (net_.automaton(i).location(locations[i]).urgent)
      return true;
  return false;
}

SymbolicState SymbolicSemantics::initial() const
{
  const auto& u = *net_.universe();
  SymbolicState s{{}, Polyhedron(net_.universe())};
  for (const auto& a : net_.automata())
    s.locations.push_back(a.initial());
  for (VarId v = 0; v < u.size(); ++v) {
    switch (u[v].sort) {
    case VarSort::Clock:
    case VarSort::WeightVariable:
      s.constraint.add(LinearExpr::var(v), Comparison::Equal, LinearExpr::value(0));
      break;
    case VarSort::TimingParameter:
      s.constraint.add(LinearExpr::var(v), Comparison::GreaterEqual, LinearExpr::value(0));
      break;
    case VarSort::WeightParameter:
      break;
    }
  }
  Polyhedron inv = invariant(s.locations);
  s.constraint = s.constraint.intersect(inv);
  if (!urgent(s.locations))
    s.constraint = s.constraint.time_elapse(inv);
  return s;
}

std::vector<SymbolicTransition> SymbolicSemantics::successors(const SymbolicState& s) const
{
  std::vector<SymbolicTransition> out;
  for (const auto& [action, members] : net_.participants()) {
    std::vector<std::vector<std::size_t>> choices;  // edge indices per member
    bool blocked = false;
    for (std::size_t i : members) {
      std::vector<std::size_t> enabled;
      const auto& edges = net_.automaton(i).edges();
      for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].source == s.locations[i] && edges[e].action == action)
          enabled.push_back(e);
      if (enabled.empty()) {
        blocked = true;
        break;
      }
      choices.push_back(std::move(enabled));
    }
    if (blocked)
      continue;

    std::vector<std::size_t> pick(members.size(), 0);
    while (true) {
      Polyhedron c = s.constraint;
      for (std::size_t m = 0; m < members.size(); ++m) {
        const Polyhedron& g = guards_[members[m]][choices[m][pick[m]]];
        if (!g.is_top())
          c = c.intersect(g);
      }
      if (!c.is_empty()) {
        std::vector<LocId> locations = s.locations;
        for (std::size_t m = 0; m < members.size(); ++m) {
          const Edge& e = net_.automaton(members[m]).edges()[choices[m][pick[m]]];
          if (!e.resets.empty())
            c = c.reset(e.resets);
          if (!e.update.empty())
            c = c.affine_image(e.update);
          locations[members[m]] = e.target;
        }
        Polyhedron inv = invariant(locations);
        c = c.intersect(inv);
        if (!c.is_empty()) {
          if (!urgent(locations))
            c = c.time_elapse(inv);
          out.push_back(SymbolicTransition{action, SymbolicState{std::move(locations), std::move(c)}});
        }
      }
      std::size_t d = 0;
      while (d < pick.size() && ++pick[d] == choices[d].size())
        pick[d++] = 0;
      if (d == pick.size())
        break;
    }
  }
  return out;
}

SymbolicState initial_state(const Network& net) { return SymbolicSemantics(net).initial(); }

std::vector<SymbolicTransition> symbolic_successors(const Network& net, const SymbolicState& s)
{
  return SymbolicSemantics(net).successors(s);
}

LocationPredicate location_predicate(const Network& net, std::string_view automaton, std::string_view location)
{
  std::size_t index = net.index_of(automaton);
  LocId loc = net.automaton(index).location_id(location);
  return [index, loc](const std::vector<LocId>& l) { return l[index] == loc; };
}

namespace {

struct Stored {
  SymbolicState state;
  std::size_t parent;
  std::string action;
};

constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

std::vector<std::string> witness(const std::vector<Stored>& states, std::size_t i)
{
  std::vector<std::string> out;
  for (; states[i].parent != kNoParent; i = states[i].parent)
    out.push_back(states[i].action);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

ConstraintResult ef_synth(const Network& net, const LocationPredicate& target, const SynthesisOptions& options)
{
  auto started = std::chrono::steady_clock::now();
  const auto& u = *net.universe();
  SymbolicSemantics sem(net);
  ConstraintResult result;
  result.universe = net.universe();

  std::vector<VarId> hidden;
  for (VarId v = 0; v < u.size(); ++v)
    if (!u.is_parameter(v))
      hidden.push_back(v);

  std::optional<std::mt19937> rng;
  if (options.shuffle_seed)
    rng.emplace(*options.shuffle_seed);

  std::vector<Stored> states;
  std::map<std::vector<LocId>, std::vector<std::size_t>> by_location;

  // nullopt when a stored state with the same locations includes it
  auto store = [&](SymbolicState s, std::size_t parent, std::string action) -> std::optional<std::size_t> {
    auto& same = by_location[s.locations];
    if (options.subsumption)
      for (std::size_t j : same)
        if (states[j].state.constraint.includes(s.constraint)) {
          ++result.stats.subsumed;
          return std::nullopt;
        }
    same.push_back(states.size());
    states.push_back(Stored{std::move(s), parent, std::move(action)});
    return states.size() - 1;
  };

  auto record = [&](std::size_t i) {
    ++result.stats.target_states;
    Polyhedron p = states[i].state.constraint.eliminate(hidden).minimized();
    for (const auto& d : result.disjuncts)
      if (d.constraint.includes(p))
        return;
    std::erase_if(result.disjuncts, [&](const Disjunct& d) { return p.includes(d.constraint); });
    result.disjuncts.push_back(Disjunct{std::move(p), witness(states, i)});
  };

  std::vector<std::size_t> frontier;
  if (auto i = store(sem.initial(), kNoParent, "")) {
    if (target(states[*i].state.locations))
      record(*i);
    else
      frontier.push_back(*i);
  }

  unsigned jobs = std::max(1U, options.jobs);
  while (!frontier.empty()) {
    if (rng)
      std::shuffle(frontier.begin(), frontier.end(), *rng);
    std::vector<std::vector<SymbolicTransition>> next(frontier.size());
    auto expand = [&](std::size_t from, std::size_t step) {
      for (std::size_t k = from; k < frontier.size(); k += step)
        next[k] = sem.successors(states[frontier[k]].state);
    };
    if (jobs == 1 || frontier.size() == 1) {
      expand(0, 1);
    }
    else {
      std::vector<std::thread> workers;
      for (unsigned w = 0; w < jobs; ++w)
        workers.emplace_back(expand, w, jobs);
      for (auto& t : workers)
        t.join();
    }

    std::vector<std::size_t> level;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      if (rng)
        std::shuffle(next[k].begin(), next[k].end(), *rng);
      for (auto& t : next[k]) {
        ++result.stats.transitions;
        auto i = store(std::move(t.target), frontier[k], std::move(t.action));
        if (!i)
          continue;
        if (target(states[*i].state.locations))
          record(*i);
        else
          level.push_back(*i);
      }
    }
    frontier = std::move(level);
    if (options.max_states && states.size() >= options.max_states && !frontier.empty()) {
      result.complete = false;
      break;
    }
  }

  result.stats.states = states.size();
  result.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::vector<Polyhedron> ConstraintResult::polyhedra() const
{
  std::vector<Polyhedron> out;
  for (const auto& d : disjuncts)
    out.push_back(d.constraint);
  return out;
}

bool check_valuation(const ConstraintResult& result, const ParameterValuation& valuation)
{
  const auto& u = *result.universe;
  PointValuation point;
  for (VarId v = 0; v < u.size(); ++v) {
    if (!u.is_parameter(v))
      continue;
    auto it = valuation.find(u[v].name);
    if (it == valuation.end())
      throw std::invalid_argument("no value for parameter '" + u[v].name + "'");
    point[v] = it->second;
  }
  return std::any_of(result.disjuncts.begin(), result.disjuncts.end(),
                     [&](const Disjunct& d) { return d.constraint.contains(point); });
}

bool equivalent(const ConstraintResult& a, const ConstraintResult& b)
{
  auto pa = a.polyhedra();
  auto pb = b.polyhedra();
  return same_union(pa, pb);
}

}  // namespace aftsynth
