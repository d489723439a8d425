#pragma once

#include <string>
#include <vector>

#include "probact/model.hpp"
#include "probact/network.hpp"

namespace probact {

// Belief network fragment conditioned on its free nodes. Free nodes carry no
// tables and accept no incoming arcs; every bound node has a table. The
// fragment only becomes a distribution once a prior over the free nodes is
// bound in.
struct ConditionalBeliefNet {
  std::vector<Distinction> free_nodes;
  std::vector<Distinction> bound_nodes;
  std::vector<Arc> arcs;
  std::vector<Cpt> cpts;  // one per bound node
  std::string notes;

  bool operator==(const ConditionalBeliefNet&) const = default;
};

// Structural check mirroring validate_network, plus the fragment rules:
// free and bound names must not collide, arcs may not end in a free node
// (code "arc_into_free"), and free nodes may not carry tables (code
// "cpt_for_free").
ValidationReport validate_cbn(const ConditionalBeliefNet& cbn);

// Complete the fragment with a prior: a belief network over exactly the
// free names with identical domains. Throws ModelError when the pieces do
// not fit or the combined network fails validation.
BeliefNetwork bind(const ConditionalBeliefNet& cbn,
                   const BeliefNetwork& prior);

}  // namespace probact
