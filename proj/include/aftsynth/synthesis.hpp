#pragma once

#include "aftsynth/pwta.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aftsynth {

struct SymbolicState {
  std::vector<LocId> locations;
  Polyhedron constraint;
};

struct SymbolicTransition {
  std::string action;
  SymbolicState target;
};

/// Initial locations, clocks and weights at zero, timing parameters
/// non-negative, time elapsed unless a location is urgent.
SymbolicState initial_state(const Network& net);

/// Caches guard and invariant polyhedra of a network.
class SymbolicSemantics {
public:
  explicit SymbolicSemantics(const Network& net);

  const Network& network() const { return net_; }
  SymbolicState initial() const;
  std::vector<SymbolicTransition> successors(const SymbolicState& s) const;
  Polyhedron invariant(const std::vector<LocId>& locations) const;
  bool urgent(const std::vector<LocId>& locations) const;

private:
  const Network& net_;
  std::vector<std::vector<Polyhedron>> invariants_;  // [automaton][location]
  std::vector<std::vector<Polyhedron>> guards_;      // [automaton][edge]
};

std::vector<SymbolicTransition> symbolic_successors(const Network& net, const SymbolicState& s);

using LocationPredicate = std::function<bool(const std::vector<LocId>&)>;

LocationPredicate location_predicate(const Network& net, std::string_view automaton, std::string_view location);

struct SynthesisOptions {
  bool subsumption = true;
  unsigned jobs = 1;
  /// Shuffles the exploration order; the result must not depend on it.
  std::optional<std::uint32_t> shuffle_seed;
  /// Stop after this many stored states; 0 means no limit.
  std::size_t max_states = 0;
};

struct Disjunct {
  /// Over the network universe, mentioning parameters only.
  Polyhedron constraint;
  /// Actions from the initial state to the first target state producing it.
  std::vector<std::string> witness;
};

struct SynthesisStats {
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::size_t subsumed = 0;
  std::size_t target_states = 0;
  double seconds = 0;
};

struct ConstraintResult {
  UniversePtr universe;
  std::vector<Disjunct> disjuncts;
  SynthesisStats stats;
  /// False when max_states cut the exploration short.
  bool complete = true;

  std::vector<Polyhedron> polyhedra() const;
  bool empty() const { return disjuncts.empty(); }
};

/// Parameter valuations for which some run reaches a target location.
/// Disjuncts included in another one are dropped.
ConstraintResult ef_synth(const Network& net, const LocationPredicate& target, const SynthesisOptions& options = {});

/// Throws std::invalid_argument when a parameter of the universe has no value.
bool check_valuation(const ConstraintResult& result, const ParameterValuation& valuation);

/// Same union of disjuncts.
bool equivalent(const ConstraintResult& a, const ConstraintResult& b);

}  // namespace aftsynth
