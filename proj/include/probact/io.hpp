#pragma once

#include <string>
#include <variant>

#include "probact/action.hpp"
#include "probact/cbn.hpp"
#include "probact/model.hpp"
#include "probact/projection.hpp"

namespace probact {

using ParsedModel = std::variant<BeliefNetwork, ConditionalBeliefNet,
                                 ActionModel, EnvironmentModel>;

// Reads one model document (JSON syntax, "kind" selects the type), then runs
// the type's validator. Malformed text throws ParseError with a 1-based
// line; a well-formed but invalid model throws ModelError.
ParsedModel parse_model(const std::string& text);

// Canonical document: keys sorted, distinctions in name order, arcs sorted,
// tables keyed by node in name order with parent order preserved, numbers
// rendered with 17 significant digits, two-space indent, trailing newline.
// Structurally equal values always serialize to identical bytes.
std::string serialize_model(const BeliefNetwork& bn);
std::string serialize_model(const ConditionalBeliefNet& cbn);
std::string serialize_model(const ActionModel& a);
std::string serialize_model(const EnvironmentModel& v);
std::string serialize_model(const ParsedModel& m);

struct DotOptions {
  // Box slice-1+ nodes of a time-unrolled network into per-slice clusters.
  bool cluster_slices = true;
};

// Deterministic DOT text: nodes and edges in sorted order. Bound and effect
// nodes sit in a rounded cluster; single-valued nodes render as boxes.
std::string export_dot(const BeliefNetwork& bn, const DotOptions& opts = {});
std::string export_dot(const ConditionalBeliefNet& cbn,
                       const DotOptions& opts = {});
std::string export_dot(const ActionModel& a, const DotOptions& opts = {});
std::string export_dot(const EnvironmentModel& v, const DotOptions& opts = {});
std::string export_dot(const ParsedModel& m, const DotOptions& opts = {});

// Whole-file text IO; failures throw IoError naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace probact
