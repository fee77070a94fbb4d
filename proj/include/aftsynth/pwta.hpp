#pragma once

#include "aftsynth/polyhedron.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace aftsynth {

/// `lhs cmp rhs` over the network universe.
struct Atom {
  LinearExpr lhs;
  Comparison comparison = Comparison::LessEqual;
  LinearExpr rhs;

  bool operator==(const Atom&) const = default;
};

using Guard = std::vector<Atom>;

using WeightUpdate = std::vector<std::pair<VarId, LinearExpr>>;

using LocId = std::size_t;

struct Location {
  std::string name;
  bool urgent = false;
  Guard invariant;
};

struct Edge {
  LocId source = 0;
  Guard guard;
  std::string action;
  std::vector<VarId> resets;
  WeightUpdate update;
  LocId target = 0;
  /// Observation edges may compare weights with weight parameters.
  bool observation = false;
};

class Pwta {
public:
  explicit Pwta(std::string name) : name_(std::move(name)) {}

  LocId add_location(std::string name, bool urgent = false, Guard invariant = {});
  void add_edge(Edge edge);
  void add_action(const std::string& action) { alphabet_.insert(action); }
  void set_initial(LocId loc) { initial_ = loc; }
  void add_accepting(LocId loc) { accepting_.insert(loc); }
  void add_clock(VarId clock) { clocks_.push_back(clock); }

  const std::string& name() const { return name_; }
  const std::vector<Location>& locations() const { return locations_; }
  const Location& location(LocId id) const { return locations_.at(id); }
  LocId location_id(std::string_view name) const;
  const std::vector<Edge>& edges() const { return edges_; }
  const std::set<std::string>& alphabet() const { return alphabet_; }
  LocId initial() const { return initial_; }
  const std::set<LocId>& accepting() const { return accepting_; }
  const std::vector<VarId>& clocks() const { return clocks_; }

  /// Edges leaving `loc` labelled `action`.
  std::vector<const Edge*> edges_from(LocId loc, std::string_view action) const;

private:
  std::string name_;
  std::vector<Location> locations_;
  std::vector<Edge> edges_;
  std::set<std::string> alphabet_;
  LocId initial_ = 0;
  std::set<LocId> accepting_;
  std::vector<VarId> clocks_;
};

/// Automata synchronizing by multi-party handshake: an action fires only if
/// every automaton whose alphabet contains it takes an edge labelled with it.
class Network {
public:
  explicit Network(UniversePtr universe) : universe_(std::move(universe)) {}

  std::size_t add(Pwta automaton);

  const UniversePtr& universe() const { return universe_; }
  const std::vector<Pwta>& automata() const { return automata_; }
  const Pwta& automaton(std::size_t i) const { return automata_.at(i); }
  std::size_t index_of(std::string_view name) const;

  /// Action label -> indices of the automata that must take part.
  const std::map<std::string, std::vector<std::size_t>>& participants() const { return participants_; }

  /// Throws std::invalid_argument on the first ill-formed element.
  void check() const;

private:
  UniversePtr universe_;
  std::vector<Pwta> automata_;
  std::map<std::string, std::vector<std::size_t>> participants_;
};

std::string to_string(const Atom& atom, const VariableUniverse& universe);
std::string to_string(const Guard& guard, const VariableUniverse& universe);

/// Guard or invariant as a polyhedron over the universe.
Polyhedron to_polyhedron(const Guard& guard, const UniversePtr& universe);

// ---------------------------------------------------------------------------
// Concrete semantics

/// Values of every variable of the universe: clocks and weights evolve,
/// parameters are fixed for the run.
using Valuation = std::vector<Rational>;

struct ConcreteState {
  std::vector<LocId> locations;
  Valuation values;

  bool operator==(const ConcreteState&) const = default;
};

/// Parameter values by name; every parameter of the universe must be given.
using ParameterValuation = std::map<std::string, Rational>;

ConcreteState initial_concrete_state(const Network& net, const ParameterValuation& parameters);

bool holds(const Guard& guard, const Valuation& values);

/// Simultaneous update: every right-hand side reads the pre-state.
Valuation evaluate_update(const WeightUpdate& update, const Valuation& values);

bool is_urgent(const Network& net, const ConcreteState& state);

/// Supremum of the delays allowed by the current invariants; nullopt when unbounded.
struct DelayBound {
  std::optional<Rational> bound;
  bool strict = false;
};
DelayBound max_delay(const Network& net, const ConcreteState& state);

/// Lets `d` time units pass; nullopt when an invariant or urgency forbids it.
std::optional<ConcreteState> delay(const Network& net, const ConcreteState& state, const Rational& d);

struct Transition {
  std::string action;
  ConcreteState target;
};

/// Discrete successors without delay; resets and updates applied in automaton order.
std::vector<Transition> discrete_successors(const Network& net, const ConcreteState& state);

struct TimedTransition {
  std::string action;
  Rational delay;
  ConcreteState target;
};

/// Every (d, a)-successor for the delays in `delays`.
std::vector<TimedTransition> synchronized_successors(const Network& net, const ConcreteState& state,
                                                     const std::vector<Rational>& delays);

struct Trace {
  ConcreteState initial;
  std::vector<TimedTransition> steps;
};

using TargetPredicate = std::function<bool(const ConcreteState&, const std::string& last_action)>;

struct RunResult {
  enum class Status { Reached, Unreachable, BudgetExhausted };
  Status status = Status::Unreachable;
  std::optional<Trace> trace;
  std::size_t explored = 0;
};

/// Depth-first search over the concrete semantics with delays drawn from
/// a digitization grid; complete for networks whose clock atoms are closed,
/// and for strict atoms up to the grid refinement by the clock count.
RunResult run_reaches(const Network& net, const ParameterValuation& parameters, const TargetPredicate& target,
                      std::size_t budget = 2'000'000);

/// Replays a prescribed sequence of (action, delay); stops at the first step
/// that cannot be taken and reports its index.
struct Replay {
  Trace trace;
  std::optional<std::size_t> failed_step;
  std::string reason;
};
Replay replay(const Network& net, const ParameterValuation& parameters,
              const std::vector<std::pair<std::string, Rational>>& steps);

/// Location predicate: automaton `automaton` is in location `location`.
TargetPredicate location_target(const Network& net, std::string_view automaton, std::string_view location);

std::string to_string(const Network& net, const ConcreteState& state);
std::string to_string(const Network& net, const Trace& trace);

}  // namespace aftsynth
