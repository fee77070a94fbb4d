#pragma once

#include "aftsynth/galileo.hpp"
#include "aftsynth/synthesis.hpp"

#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace aftsynth {

/// One way for the tree to succeed: any instant of [lo, hi], with fixed weights.
struct Scenario {
  Rational lo;
  Rational hi;
  Rational cost;
  Rational damage;
  std::set<std::string> leaves;

  std::weak_ordering operator<=>(const Scenario&) const = default;
  bool operator==(const Scenario&) const = default;
};

class OracleUnsupported : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Gate kinds the bottom-up calculation handles.
bool oracle_supports(GateKind kind);

/// Success scenarios of a concrete tree built from AND, OR, SAND, SOR and VOT
/// gates, sorted and without duplicates. Throws OracleUnsupported otherwise.
std::vector<Scenario> scenarios(const AttackFaultTree& tree);

struct CrosscheckReport {
  std::size_t scenario_samples = 0;
  std::size_t disjunct_samples = 0;
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty(); }
};

/// Scenario windows sampled at endpoints and midpoint must satisfy the
/// synthesized constraint, and samples of every disjunct must fall in a
/// scenario with the same weights. A parametric result is compared at
/// `fixed`, with `tree` the instance at those values.
CrosscheckReport crosscheck(const AttackFaultTree& tree, const ConstraintResult& result,
                            const ParameterValuation& fixed = {});

std::string to_string(const Scenario& s);

}  // namespace aftsynth
