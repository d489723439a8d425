#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "probact/model.hpp"

namespace probact::detail {

// Index-based adjacency view. Building one enforces the preconditions the
// graph algorithms assume: unique node names and arcs between known nodes.
// Duplicate arcs collapse to one edge.
struct CompiledNet {
  const BeliefNetwork* net = nullptr;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> parents;
  std::vector<std::vector<std::size_t>> children;

  static CompiledNet build(const BeliefNetwork& bn);

  std::size_t at(const std::string& name) const;
  const std::string& name(std::size_t i) const { return net->nodes[i].name; }
};

}  // namespace probact::detail
