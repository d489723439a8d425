#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "probact/model.hpp"

namespace probact {

// Joint posterior over a set of nodes. Scope is sorted by name; the value
// layout follows the scope with the last entry varying fastest.
struct Dist {
  std::vector<Distinction> scope;
  std::vector<double> probabilities;

  // Probability of one cell; `where` must assign every scope variable.
  double at(const Assignment& where) const;
};

// Probability of a complete assignment: the product of one table entry per
// node. Every node must be assigned.
double joint_probability(const BeliefNetwork& bn, const Assignment& a);

// Exact posterior P(targets | evidence) by variable elimination with the
// min-degree order (ties by name). Targets may overlap the evidence; such
// variables come back as point masses. Throws ZeroEvidenceError when the
// evidence has probability zero.
Dist marginal(const BeliefNetwork& bn, const std::vector<std::string>& targets,
              const Assignment& evidence = {});

// Same posterior by summing the full joint state space. Shares no table
// machinery with `marginal`, so the two act as independent witnesses.
// Throws LimitError when the network has more than max_states joint states.
Dist enumerate_marginal(const BeliefNetwork& bn,
                        const std::vector<std::string>& targets,
                        const Assignment& evidence = {},
                        std::size_t max_states = std::size_t{1} << 20);

// Ancestral sampling: n complete assignments drawn from the joint. The
// stream depends only on (bn, seed), not on platform or library version.
std::vector<Assignment> forward_sample(const BeliefNetwork& bn, std::size_t n,
                                       std::uint64_t seed);

}  // namespace probact
