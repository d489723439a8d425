#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "probact/model.hpp"

namespace probact {

// Dense table over a list of discrete variables. Values are laid out with
// the last scope variable varying fastest, so a table whose scope is
// [parents..., child] is exactly the concatenation of the CPT rows.
struct Factor {
  std::vector<std::string> scope;
  std::vector<std::size_t> card;
  std::vector<double> values;

  bool contains(const std::string& var) const;
  // Index of `var` in scope; throws ModelError when absent.
  std::size_t position(const std::string& var) const;
  // Distance between consecutive values of scope[pos], everything else fixed.
  std::size_t stride_of(std::size_t pos) const;
};

// Scope-free factor holding the single value 1.
Factor unit_factor();

// Table for one node: scope [parents..., child], values = concatenated rows.
Factor factor_from_cpt(const BeliefNetwork& bn, const Cpt& cpt);

// Pointwise product. Result scope is a's scope followed by b's extra
// variables in b's order. Shared variables must agree on cardinality.
Factor product(const Factor& a, const Factor& b);

// Sum `var` out of the scope.
Factor marginalize(const Factor& f, const std::string& var);

// Fix `var` to its value_index-th value and drop it from the scope.
Factor reduce(const Factor& f, const std::string& var,
              std::size_t value_index);

// Reorder the scope; new_scope must be a permutation of f.scope.
Factor transposed(const Factor& f, const std::vector<std::string>& new_scope);

double total_mass(const Factor& f);

// Rescale to mass 1; throws ZeroEvidenceError when the mass is not positive.
void normalize_in_place(Factor& f);

}  // namespace probact
