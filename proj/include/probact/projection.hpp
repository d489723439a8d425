#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "probact/action.hpp"
#include "probact/model.hpp"

namespace probact {

// "base@slice" node naming for time-unrolled networks. Bases never contain
// '@'; slice 0 is the initial state.
struct TimedName {
  std::string base;
  int slice = 0;

  std::string render() const;
  static TimedName parse(const std::string& text);

  auto operator<=>(const TimedName&) const = default;
};

struct ProjectionOptions {
  // Let an action overwrite distinctions the environment explains; the
  // action's table wins for those copies.
  bool allow_incompatible = false;
  // Give untouched distinctions identity-table copies in each new slice
  // instead of aliasing them across slices.
  bool materialize_persisted = false;
};

struct ProjectionResult {
  BeliefNetwork combined;  // every node named "base@slice"
  // Partition of the distinction set for the most recent transition.
  std::set<std::string> direct_effects;
  std::set<std::string> indirect_effects;
  std::set<std::string> persisted;
  int latest_slice = 0;
  std::map<std::string, TimedName> latest;  // base -> most recent copy
  std::vector<std::string> indicator_nodes;

  bool operator==(const ProjectionResult&) const = default;
};

// One action applied to a state. New-slice copies are made for the direct
// effects (tables from the action) and for every state-graph descendant of
// an effect base (tables copied from the state, parent arcs re-pointed to a
// new copy wherever one exists). Everything else is left alone.
ProjectionResult project_original(const BeliefNetwork& state,
                                  const ActionModel& a,
                                  const ProjectionOptions& opts = {});

// Same, except the consequences to copy are read off the environment: the
// copied set is the environment-graph descendants of the effect bases, with
// tables taken from the environment and parent arcs re-pointed to the most
// recent copy of each base. The action must not rewrite a distinction the
// environment explains unless opts.allow_incompatible is set.
ProjectionResult project_modified(const BeliefNetwork& state,
                                  const ActionModel& a,
                                  const EnvironmentModel& v,
                                  const ProjectionOptions& opts = {});

// Folds project_modified over the list, one slice per action, without
// intermediate extraction. Errors carry the failing action's index.
ProjectionResult project_sequence(const BeliefNetwork& state,
                                  const std::vector<ActionModel>& actions,
                                  const EnvironmentModel& v,
                                  const ProjectionOptions& opts = {});

// Collapses a projection to a plain state over the bare base names: stale
// copies are removed by joint-preserving surgery, survivors are renamed.
// Marginals match the combined network's latest copies.
BeliefNetwork extract_successor(const ProjectionResult& pr);

}  // namespace probact
