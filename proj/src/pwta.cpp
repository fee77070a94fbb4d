#include "aftsynth/pwta.hpp"

#include <algorithm>
#include <sstream>

namespace aftsynth {

LocId Pwta::add_location(std::string name, bool urgent, Guard invariant)
{
  if (std::any_of(locations_.begin(), locations_.end(), [&](const Location& l) { return l.name == name; }))
    throw std::invalid_argument("automaton '" + name_ + "' already has a location '" + name + "'");
  locations_.push_back(Location{std::move(name), urgent, std::move(invariant)});
  return locations_.size() - 1;
}

void Pwta::add_edge(Edge edge)
{
  if (edge.source >= locations_.size() || edge.target >= locations_.size())
    throw std::invalid_argument("edge of automaton '" + name_ + "' refers to an unknown location");
  alphabet_.insert(edge.action);
  edges_.push_back(std::move(edge));
}

LocId Pwta::location_id(std::string_view name) const
{
  for (LocId i = 0; i < locations_.size(); ++i)
    if (locations_[i].name == name)
      return i;
  throw std::out_of_range("automaton '" + name_ + "' has no location '" + std::string(name) + "'");
}

std::vector<const Edge*> Pwta::edges_from(LocId loc, std::string_view action) const
{
  std::vector<const Edge*> out;
  for (const auto& e : edges_)
    if (e.source == loc && e.action == action)
      out.push_back(&e);
  return out;
}

std::size_t Network::add(Pwta automaton)
{
  std::size_t index = automata_.size();
  for (const auto& a : automaton.alphabet())
    participants_[a].push_back(index);
  automata_.push_back(std::move(automaton));
  return index;
}

std::size_t Network::index_of(std::string_view name) const
{
  for (std::size_t i = 0; i < automata_.size(); ++i)
    if (automata_[i].name() == name)
      return i;
  throw std::out_of_range("no automaton named '" + std::string(name) + "'");
}

namespace {

std::optional<VarId> single_var(const LinearExpr& e)
{
  if (e.terms.size() != 1 || e.constant != 0 || e.terms.begin()->second != 1)
    return std::nullopt;
  return e.terms.begin()->first;
}

bool is_sort(const VariableUniverse& u, const LinearExpr& e, VarSort sort)
{
  auto v = single_var(e);
  return v && u[*v].sort == sort;
}

bool is_time_bound(const VariableUniverse& u, const LinearExpr& e)
{
  return (e.terms.empty() && e.constant >= 0) || is_sort(u, e, VarSort::TimingParameter);
}

}  // namespace

void Network::check() const
{
  const auto& u = *universe_;
  auto fail = [](const std::string& where, const std::string& what) {
    throw std::invalid_argument(where + ": " + what);
  };
  for (const auto& a : automata_) {
    if (a.initial() >= a.locations().size())
      fail(a.name(), "initial location missing");
    for (const auto& loc : a.locations()) {
      std::string where = a.name() + "." + loc.name;
      if (loc.urgent && !loc.invariant.empty())
        fail(where, "urgent location with an invariant");
      for (const auto& atom : loc.invariant)
        if (!is_sort(u, atom.lhs, VarSort::Clock) || !is_time_bound(u, atom.rhs) ||
            (atom.comparison != Comparison::Less && atom.comparison != Comparison::LessEqual))
          fail(where, "invariant atom '" + to_string(atom, u) + "' is not an upper clock bound");
    }
    for (const auto& e : a.edges()) {
      std::string where = a.name() + "." + a.location(e.source).name + " --" + e.action + "-->";
      for (const auto& atom : e.guard) {
        bool clock_atom = is_sort(u, atom.lhs, VarSort::Clock) && is_time_bound(u, atom.rhs);
        bool weight_atom = e.observation && atom.comparison == Comparison::Equal &&
                           is_sort(u, atom.lhs, VarSort::WeightVariable) &&
                           is_sort(u, atom.rhs, VarSort::WeightParameter);
        if (!clock_atom && !weight_atom)
          fail(where, "ill-formed guard atom '" + to_string(atom, u) + "'");
      }
      for (VarId r : e.resets)
        if (r >= u.size() || u[r].sort != VarSort::Clock)
          fail(where, "reset of a non-clock");
      std::set<VarId> assigned;
      for (const auto& [w, expr] : e.update) {
        if (w >= u.size() || u[w].sort != VarSort::WeightVariable)
          fail(where, "update of a non-weight variable");
        if (!assigned.insert(w).second)
          fail(where, "variable '" + u[w].name + "' assigned twice");
        for (const auto& [v, k] : expr.terms)
          if (u[v].sort != VarSort::WeightVariable && u[v].sort != VarSort::WeightParameter)
            fail(where, "update expression reads '" + u[v].name + "'");
      }
    }
  }
}

namespace {

std::string expr_to_string(const LinearExpr& e, const VariableUniverse& u)
{
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, k] : e.terms) {
    Rational mag = abs(k);
    if (first)
      os << (k < 0 ? "-" : "");
    else
      os << (k < 0 ? " - " : " + ");
    if (mag != 1)
      os << to_decimal_string(mag) << "*";
    os << u[v].name;
    first = false;
  }
  if (first)
    os << to_decimal_string(e.constant);
  else if (e.constant != 0)
    os << (e.constant < 0 ? " - " : " + ") << to_decimal_string(abs(e.constant));
  return os.str();
}

}  // namespace

std::string to_string(const Atom& atom, const VariableUniverse& universe)
{
  return expr_to_string(atom.lhs, universe) + " " + std::string(to_string(atom.comparison)) + " " +
         expr_to_string(atom.rhs, universe);
}

std::string to_string(const Guard& guard, const VariableUniverse& universe)
{
  if (guard.empty())
    return "true";
  std::string out;
  for (const auto& a : guard) {
    if (!out.empty())
      out += " & ";
    out += to_string(a, universe);
  }
  return out;
}

Polyhedron to_polyhedron(const Guard& guard, const UniversePtr& universe)
{
  Polyhedron p(universe);
  for (const auto& a : guard)
    p.add(a.lhs, a.comparison, a.rhs);
  return p;
}

// ---------------------------------------------------------------------------
// Concrete semantics

namespace {

Rational evaluate(const LinearExpr& e, const Valuation& values)
{
  Rational sum = e.constant;
  for (const auto& [v, k] : e.terms)
    sum += k * values.at(v);
  return sum;
}

bool compare(const Rational& a, Comparison cmp, const Rational& b)
{
  switch (cmp) {
  case Comparison::Less:
    return a < b;
  case Comparison::LessEqual:
    return a <= b;
  case Comparison::Equal:
    return a == b;
  case Comparison::GreaterEqual:
    return a >= b;
  case Comparison::Greater:
    return a > b;
  }
  return false;
}

bool is_clock(const VariableUniverse& u, VarId v) { return u[v].sort == VarSort::Clock; }

}  // namespace

ConcreteState initial_concrete_state(const Network& net, const ParameterValuation& parameters)
{
  const auto& u = *net.universe();
  ConcreteState s;
  s.values.assign(u.size(), Rational(0));
  for (VarId v = 0; v < u.size(); ++v) {
    if (!u.is_parameter(v))
      continue;
    auto it = parameters.find(u[v].name);
    if (it == parameters.end())
      throw std::invalid_argument("no value for parameter '" + u[v].name + "'");
    if (u[v].sort == VarSort::TimingParameter && it->second < 0)
      throw std::invalid_argument("timing parameter '" + u[v].name + "' must be non-negative");
    s.values[v] = it->second;
  }
  for (const auto& a : net.automata())
    s.locations.push_back(a.initial());
  return s;
}

bool holds(const Guard& guard, const Valuation& values)
{
  return std::all_of(guard.begin(), guard.end(), [&](const Atom& a) {
    return compare(evaluate(a.lhs, values), a.comparison, evaluate(a.rhs, values));
  });
}

Valuation evaluate_update(const WeightUpdate& update, const Valuation& values)
{
  Valuation out = values;
  for (const auto& [w, expr] : update)
    out.at(w) = evaluate(expr, values);
  return out;
}

bool is_urgent(const Network& net, const ConcreteState& state)
{
  for (std::size_t i = 0; i < state.locations.size(); ++i)
    if (net.automaton(i).location(state.locations[i]).urgent)
      return true;
  return false;
}

DelayBound max_delay(const Network& net, const ConcreteState& state)
{
  DelayBound out;
  if (is_urgent(net, state)) {
    out.bound = Rational(0);
    return out;
  }
  const auto& u = *net.universe();
  auto tighten = [&](const Rational& b, bool strict) {
    if (!out.bound || b < *out.bound || (b == *out.bound && strict && !out.strict)) {
      out.bound = b;
      out.strict = strict;
    }
  };
  for (std::size_t i = 0; i < state.locations.size(); ++i) {
    for (const auto& atom : net.automaton(i).location(state.locations[i]).invariant) {
      // e(d) = e0 + k*d compared with 0
      LinearExpr e = atom.lhs - atom.rhs;
      Rational e0 = evaluate(e, state.values);
      Rational k = 0;
      for (const auto& [v, c] : e.terms)
        if (is_clock(u, v))
          k += c;
      Comparison cmp = atom.comparison;
      if (cmp == Comparison::Greater || cmp == Comparison::GreaterEqual) {
        e0 = -e0;
        k = -k;
        cmp = cmp == Comparison::Greater ? Comparison::Less : Comparison::LessEqual;
      }
      if (k > 0)
        tighten(-e0 / k, cmp == Comparison::Less);
      if (cmp == Comparison::Equal && k != 0)
        tighten(Rational(0), false);
    }
  }
  return out;
}

std::optional<ConcreteState> delay(const Network& net, const ConcreteState& state, const Rational& d)
{
  if (d < 0)
    return std::nullopt;
  if (d == 0)
    return state;
  DelayBound b = max_delay(net, state);
  if (b.bound && (d > *b.bound || (d == *b.bound && b.strict)))
    return std::nullopt;
  const auto& u = *net.universe();
  ConcreteState out = state;
  for (VarId v = 0; v < u.size(); ++v)
    if (is_clock(u, v))
      out.values[v] += d;
  return out;
}

std::vector<Transition> discrete_successors(const Network& net, const ConcreteState& state)
{
  // enabled edges grouped by action, then by automaton
  std::vector<std::pair<std::size_t, const Edge*>> enabled;
  for (std::size_t i = 0; i < state.locations.size(); ++i)
    for (const auto& e : net.automaton(i).edges())
      if (e.source == state.locations[i] && holds(e.guard, state.values))
        enabled.emplace_back(i, &e);
  std::stable_sort(enabled.begin(), enabled.end(),
                   [](const auto& a, const auto& b) { return a.second->action < b.second->action; });

  std::vector<Transition> out;
  for (std::size_t from = 0; from < enabled.size();) {
    const std::string& action = enabled[from].second->action;
    std::size_t to = from;
    while (to < enabled.size() && enabled[to].second->action == action)
      ++to;
    const auto& members = net.participants().find(action)->second;
    std::vector<std::vector<const Edge*>> choices(members.size());
    for (std::size_t k = from; k < to; ++k) {
      auto m = std::find(members.begin(), members.end(), enabled[k].first) - members.begin();
      choices[static_cast<std::size_t>(m)].push_back(enabled[k].second);
    }
    from = to;
    if (std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); }))
      continue;

    std::vector<std::size_t> pick(members.size(), 0);
    while (true) {
      ConcreteState next = state;
      for (std::size_t m = 0; m < members.size(); ++m) {
        const Edge* e = choices[m][pick[m]];
        next.locations[members[m]] = e->target;
        for (VarId r : e->resets)
          next.values[r] = 0;
        if (!e->update.empty())
          next.values = evaluate_update(e->update, next.values);
      }
      bool ok = true;
      for (std::size_t i = 0; i < next.locations.size() && ok; ++i)
        ok = holds(net.automaton(i).location(next.locations[i]).invariant, next.values);
      if (ok)
        out.push_back(Transition{action, std::move(next)});

      std::size_t d = 0;
      while (d < pick.size() && ++pick[d] == choices[d].size())
        pick[d++] = 0;
      if (d == pick.size())
        break;
    }
  }
  return out;
}

std::vector<TimedTransition> synchronized_successors(const Network& net, const ConcreteState& state,
                                                     const std::vector<Rational>& delays)
{
  std::vector<TimedTransition> out;
  DelayBound b = max_delay(net, state);
  const auto& u = *net.universe();
  for (const auto& d : delays) {
    if (d < 0 || (b.bound && (d > *b.bound || (d == *b.bound && b.strict))))
      continue;
    ConcreteState delayed = state;
    for (VarId v = 0; v < u.size(); ++v)
      if (is_clock(u, v))
        delayed.values[v] += d;
    for (auto& t : discrete_successors(net, delayed))
      out.push_back(TimedTransition{std::move(t.action), d, std::move(t.target)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct Grid {
  Rational step;
  Rational cap;  // clock values above this are indistinguishable
};

Grid digitization_grid(const Network& net, const ConcreteState& init)
{
  const auto& u = *net.universe();
  Integer lcm_den = 1;
  Rational horizon = 0;
  bool strict = false;
  auto visit = [&](const Atom& a) {
    LinearExpr e = a.lhs - a.rhs;
    bool clocked = std::any_of(e.terms.begin(), e.terms.end(), [&](const auto& t) { return is_clock(u, t.first); });
    if (!clocked)
      return;
    if (a.comparison == Comparison::Less || a.comparison == Comparison::Greater)
      strict = true;
    Rational rest = e.constant;
    for (const auto& [v, k] : e.terms) {
      if (!is_clock(u, v))
        rest += k * init.values[v];
      lcm_den = lcm(lcm_den, k.get_den());
    }
    lcm_den = lcm(lcm_den, rest.get_den());
    horizon = std::max(horizon, Rational(abs(rest)));
  };
  for (const auto& a : net.automata()) {
    for (const auto& loc : a.locations())
      for (const auto& atom : loc.invariant)
        visit(atom);
    for (const auto& e : a.edges())
      for (const auto& atom : e.guard)
        visit(atom);
  }
  Grid g;
  Integer slots = 1;
  if (strict)
    slots = static_cast<unsigned long>(u.of_sort(VarSort::Clock).size() + 1);
  g.step = Rational(Integer(1), lcm_den * slots);
  g.step.canonicalize();
  g.cap = horizon + g.step;
  return g;
}

class Search {
public:
  Search(const Network& net, const TargetPredicate& target, std::size_t budget, Grid grid)
      : net_(net), target_(target), budget_(budget), grid_(std::move(grid))
  {
    for (VarId v = 0; v < net.universe()->size(); ++v) {
      auto sort = (*net.universe())[v].sort;
      if (sort == VarSort::Clock)
        clocks_.push_back(v);
      else if (sort == VarSort::WeightVariable)
        weights_.push_back(v);
    }
  }

  RunResult run(const ConcreteState& init)
  {
    RunResult result;
    trace_.initial = init;
    if (target_(init, "")) {
      result.status = RunResult::Status::Reached;
      result.trace = trace_;
      return result;
    }
    bool found = dfs(init, 0);
    result.explored = explored_;
    if (found) {
      result.status = RunResult::Status::Reached;
      result.trace = trace_;
    }
    else {
      result.status = exhausted_ ? RunResult::Status::BudgetExhausted : RunResult::Status::Unreachable;
    }
    return result;
  }

private:
  /// Locations, capped clocks and weights, with values replaced by interned ids.
  std::vector<std::size_t> key(const ConcreteState& s)
  {
    auto id = [this](const Rational& v) { return values_.try_emplace(v, values_.size()).first->second; };
    std::vector<std::size_t> k(s.locations.begin(), s.locations.end());
    k.reserve(s.locations.size() + clocks_.size() + weights_.size());
    for (VarId c : clocks_)
      k.push_back(s.values[c] < grid_.cap ? id(s.values[c]) : id(grid_.cap));
    for (VarId w : weights_)
      k.push_back(id(s.values[w]));
    return k;
  }

  /// One grid step of time, when the invariants allow it and some clock is still below the cap.
  std::optional<ConcreteState> tick(const ConcreteState& s) const
  {
    Rational low = grid_.cap;
    for (VarId c : clocks_)
      low = std::min(low, s.values[c]);
    if (grid_.step > grid_.cap - low)
      return std::nullopt;
    DelayBound b = max_delay(net_, s);
    if (b.bound && (grid_.step > *b.bound || (grid_.step == *b.bound && b.strict)))
      return std::nullopt;
    ConcreteState out = s;
    for (VarId c : clocks_)
      out.values[c] += grid_.step;
    return out;
  }

  /// Delays are taken one grid step at a time, so a state reached by
  /// different delay splits is explored once; `waited` is the delay since
  /// the last action.
  bool dfs(const ConcreteState& s, const Rational& waited)
  {
    if (!visited_.insert(key(s)).second)
      return false;
    if (++explored_ > budget_) {
      exhausted_ = true;
      return false;
    }
    for (auto& t : discrete_successors(net_, s)) {
      trace_.steps.push_back(TimedTransition{t.action, waited, t.target});
      if (target_(t.target, t.action))
        return true;
      if (dfs(t.target, 0))
        return true;
      trace_.steps.pop_back();
      if (exhausted_)
        return false;
    }
    if (auto later = tick(s))
      return dfs(*later, waited + grid_.step);
    return false;
  }

  const Network& net_;
  const TargetPredicate& target_;
  std::size_t budget_;
  Grid grid_;
  std::vector<VarId> clocks_;
  std::vector<VarId> weights_;
  std::map<Rational, std::size_t> values_;
  std::set<std::vector<std::size_t>> visited_;
  std::size_t explored_ = 0;
  bool exhausted_ = false;
  Trace trace_;
};

}  // namespace

RunResult run_reaches(const Network& net, const ParameterValuation& parameters, const TargetPredicate& target,
                      std::size_t budget)
{
  if (budget == 0)
    throw std::invalid_argument("search budget must be positive");
  ConcreteState init = initial_concrete_state(net, parameters);
  return Search(net, target, budget, digitization_grid(net, init)).run(init);
}

Replay replay(const Network& net, const ParameterValuation& parameters,
              const std::vector<std::pair<std::string, Rational>>& steps)
{
  Replay out;
  out.trace.initial = initial_concrete_state(net, parameters);
  ConcreteState s = out.trace.initial;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& [action, d] = steps[i];
    auto delayed = delay(net, s, d);
    if (!delayed) {
      out.failed_step = i;
      out.reason = "delay " + to_decimal_string(d) + " is not allowed before '" + action + "'";
      return out;
    }
    std::optional<ConcreteState> next;
    for (auto& t : discrete_successors(net, *delayed))
      if (t.action == action) {
        next = std::move(t.target);
        break;
      }
    if (!next) {
      out.failed_step = i;
      out.reason = "'" + action + "' is not enabled in " + to_string(net, *delayed);
      return out;
    }
    out.trace.steps.push_back(TimedTransition{action, d, *next});
    s = std::move(*next);
  }
  return out;
}

TargetPredicate location_target(const Network& net, std::string_view automaton, std::string_view location)
{
  std::size_t index = net.index_of(automaton);
  LocId loc = net.automaton(index).location_id(location);
  return [index, loc](const ConcreteState& s, const std::string&) { return s.locations[index] == loc; };
}

std::string to_string(const Network& net, const ConcreteState& state)
{
  const auto& u = *net.universe();
  std::ostringstream os;
  os << "(";
  if (state.locations.size() != 1)
    os << "<";
  for (std::size_t i = 0; i < state.locations.size(); ++i)
    os << (i ? ", " : "") << net.automaton(i).location(state.locations[i]).name;
  if (state.locations.size() != 1)
    os << ">";
  auto group = [&](VarSort sort) {
    os << ", (";
    bool first = true;
    for (VarId v : u.of_sort(sort)) {
      os << (first ? "" : ", ") << to_decimal_string(state.values[v]);
      first = false;
    }
    os << ")";
  };
  group(VarSort::Clock);
  group(VarSort::WeightVariable);
  os << ")";
  return os.str();
}

std::string to_string(const Network& net, const Trace& trace)
{
  std::ostringstream os;
  os << to_string(net, trace.initial);
  for (const auto& step : trace.steps)
    os << "\n  --(" << step.action << ", " << to_decimal_string(step.delay) << ")--> "
       << to_string(net, step.target);
  return os.str();
}

}  // namespace aftsynth
