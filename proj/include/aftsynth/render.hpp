#pragma once

#include "aftsynth/check.hpp"
#include "aftsynth/galileo.hpp"
#include "aftsynth/oracle.hpp"
#include "aftsynth/synthesis.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace aftsynth {

struct AnalysisReport {
  std::string source;
  std::string target = "success";
  const AttackFaultTree* tree = nullptr;
  const ConstraintResult* result = nullptr;
};

/// Leaves whose success appears in a witness, in firing order.
std::vector<std::string> fired_leaves(const AttackFaultTree& tree, const std::vector<std::string>& witness);

/// One `&`-joined block per disjunct, blocks separated by `OR`, `#` comments.
std::string render_text(const AnalysisReport& report);
nlohmann::json render_json(const AnalysisReport& report);

nlohmann::json rational_json(const Rational& value);

/// Blocks as printed by render_text; `#` comments are skipped, `False` or no
/// block is the empty union. Throws std::invalid_argument on syntax errors and
/// unknown variables.
std::vector<Polyhedron> parse_constraint_text(std::string_view text, const UniversePtr& universe);

struct CheckReport {
  std::string source;
  std::optional<CrosscheckReport> oracle;
  std::optional<AgreementReport> simulation;
  /// Blocks missing from one side when an expected file was given.
  std::optional<std::vector<std::string>> expected_only;
  std::optional<std::vector<std::string>> result_only;
  std::vector<std::string> notices;

  bool ok() const;
};

std::string render_text(const CheckReport& report);
nlohmann::json render_json(const CheckReport& report);

nlohmann::json error_json(std::string_view kind, std::string_view message,
                          const std::vector<Diagnostic>& diagnostics = {});

}  // namespace aftsynth
