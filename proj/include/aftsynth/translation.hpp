#pragma once

#include "aftsynth/galileo.hpp"
#include "aftsynth/pwta.hpp"

#include <map>
#include <string>

namespace aftsynth {

struct TranslationOptions {
  /// Terminal gate locations consume late child completions. Without it a
  /// sibling still running when its gate has decided can never synchronize
  /// again and blocks time once its invariant expires.
  bool absorb_late_completions = true;
};

struct NodeActions {
  std::string start;
  std::string success;
  std::string fail;
};

struct WeightVars {
  VarId cost;
  VarId damage;
};

struct TranslationOutput {
  Network network;
  VarId total_time;
  VarId total_cost;
  VarId total_damage;
  std::map<std::string, NodeActions> actions;
  /// Gate accumulators, plus the root's under the name of the root automaton.
  std::map<std::string, WeightVars> weights;
  std::string root_automaton = "rootTA";
  std::string success_location = "success";
  std::string fail_location = "fail";
};

/// Builds the network for a validated tree; throws std::invalid_argument when
/// validate() reports problems.
TranslationOutput build_network(const AttackFaultTree& tree, const TranslationOptions& options = {});

}  // namespace aftsynth
