#pragma once

#include <set>
#include <string>

#include "probact/model.hpp"

namespace probact {

// Reverse the arc u -> v while preserving the joint distribution. Each node
// inherits the other's old parents; u additionally gains v. Requires the arc
// to exist and no other directed path from u to v. Rows of u's new table
// whose conditioning event has probability zero become uniform.
BeliefNetwork reverse_arc(const BeliefNetwork& bn, const std::string& u,
                          const std::string& v);

// Remove one node while preserving the joint over the remaining nodes: its
// outgoing arcs are reversed one by one (always toward the topologically
// first child), then the barren node is dropped.
BeliefNetwork remove_node(const BeliefNetwork& bn, const std::string& name);

// Remove several nodes, working through them in reverse topological order
// of `bn`.
BeliefNetwork remove_nodes(const BeliefNetwork& bn,
                           const std::set<std::string>& names);

}  // namespace probact
