#pragma once

#include <set>
#include <string>
#include <vector>

#include "probact/model.hpp"

namespace probact {

enum class Severity { error, warning };

struct Violation {
  Severity severity;
  std::string code;   // stable machine-readable tag, e.g. "cpt_row_sum"
  std::string where;  // node/arc/table the entry is about; may be empty
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> entries;

  // True when no entry has error severity. Warnings do not fail a model.
  bool valid() const;
  // One line per entry; empty string for a clean report.
  std::string to_string() const;
};

// Full structural check: unique nonempty names, usable domains, arcs between
// known nodes, one table per node whose parent set matches the arcs, row
// count/width/range/sum. Warnings: single-valued domains and arcs whose
// parent never changes a row (the table works without them).
ValidationReport validate_network(const BeliefNetwork& bn);

// Kahn's algorithm; ties broken by name. Throws ModelError on duplicate
// names, dangling arcs, or cycles (the message names the offending nodes).
std::vector<std::string> topological_order(const BeliefNetwork& bn);

// Proper descendants of `name` (the node itself is excluded).
std::set<std::string> descendants(const BeliefNetwork& bn,
                                  const std::string& name);

// True when every trail between x and y is blocked given z. Sets must be
// pairwise disjoint and name known nodes; empty x or y is trivially blocked.
bool d_separated(const BeliefNetwork& bn, const std::set<std::string>& x,
                 const std::set<std::string>& y,
                 const std::set<std::string>& z);

}  // namespace probact
