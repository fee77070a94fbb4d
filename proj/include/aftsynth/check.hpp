#pragma once

#include "aftsynth/synthesis.hpp"
#include "aftsynth/translation.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace aftsynth {

/// Finite grid of parameter values, e.g. `a=0..12step3,b=0..40step20` or `a=1.5`.
struct GridAxis {
  std::string name;
  std::vector<Rational> values;
};

/// Throws std::invalid_argument on malformed text.
std::vector<GridAxis> parse_grid(std::string_view text);

/// Cartesian product of the axes.
std::vector<ParameterValuation> grid_points(const std::vector<GridAxis>& axes);

struct AgreementReport {
  std::size_t compared = 0;
  std::size_t reachable = 0;
  std::size_t exhausted = 0;
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty() && exhausted == 0; }
  AgreementReport& operator+=(const AgreementReport& other);
};

/// Compares check_valuation with run_reaches at `fixed` (values for every
/// parameter except the totals) crossed with candidate totals: bounds and
/// midpoints of every disjunct under `fixed`, their neighbours half a unit
/// away on each axis, and zero.
AgreementReport simulation_agreement(const TranslationOutput& model, const ConstraintResult& result,
                                     const ParameterValuation& fixed, std::string_view target_location,
                                     std::size_t budget = 2'000'000);

}  // namespace aftsynth
