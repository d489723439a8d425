#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "probact/cbn.hpp"
#include "probact/model.hpp"
#include "probact/network.hpp"

namespace probact {

// Post-action copies of distinctions are the fragment's bound nodes, named
// "<base>@next" so an action may both read and rewrite the same distinction.
inline constexpr const char* kNextSuffix = "@next";

std::string effect_node_name(const std::string& base);
bool is_effect_node_name(const std::string& node);
// Strips the suffix; throws ModelError when `node` is not an effect name.
std::string effect_base(const std::string& node);

// Probabilistic action: the free nodes are the qualifying preceding-state
// distinctions, the bound nodes the next-state copies the action writes.
struct ActionModel {
  std::string name;
  ConditionalBeliefNet cbn;
  // When set, projection adds a single-valued indicator node carrying the
  // action's name with an arc to every effect copy. Decorative only.
  bool include_action_node = false;

  bool operator==(const ActionModel&) const = default;
};

// The relations believed to hold in every state: free nodes are the world's
// inputs, bound nodes the consequences the environment explains.
struct EnvironmentModel {
  ConditionalBeliefNet cbn;

  bool operator==(const EnvironmentModel&) const = default;
};

// Qualifying distinction names (free nodes), in declared order.
std::vector<std::string> qualification(const ActionModel& a);
// Directly affected distinction names (bound node bases), in declared order.
std::vector<std::string> effects(const ActionModel& a);

ValidationReport validate_action(const ActionModel& a);
ValidationReport validate_environment(const EnvironmentModel& v);

struct CompatibilityReport {
  bool compatible = false;
  // Effect bases the environment lists as bound (it explains them itself,
  // so an action may not overwrite them).
  std::vector<std::string> bound_effects;
};

// An action fits an environment when every direct effect is one of the
// environment's free distinctions. Names or domains unknown to the
// environment throw ModelError.
CompatibilityReport check_compatibility(const ActionModel& a,
                                        const EnvironmentModel& v);

// Looser than kProbTolerance: nested inference accumulates rounding.
inline constexpr double kConsistencyTolerance = 1e-6;

struct ConsistencyNode {
  std::string node;
  double worst = 0.0;
  std::size_t rows_checked = 0;
  std::size_t rows_unverifiable = 0;
};

struct ConsistencyReport {
  bool consistent = true;
  double tol = kConsistencyTolerance;
  double worst = 0.0;
  std::vector<ConsistencyNode> nodes;
};

// A state agrees with an environment when, for every bound node h and every
// assignment of h's environment parents, the state's exact conditional for
// h matches the environment's table row within tol. Parent assignments with
// zero probability in w are counted as unverifiable, not as failures.
ConsistencyReport check_consistency(const BeliefNetwork& w,
                                    const EnvironmentModel& v,
                                    double tol = kConsistencyTolerance);

}  // namespace probact
