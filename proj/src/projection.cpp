#include "probact/projection.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <utility>

#include "probact/network.hpp"
#include "probact/surgery.hpp"

namespace probact {

std::string TimedName::render() const {
  return base + "@" + std::to_string(slice);
}

TimedName TimedName::parse(const std::string& text) {
  const std::size_t at = text.rfind('@');
  if (at == std::string::npos || at == 0 || at + 1 == text.size())
    throw ModelError("'" + text + "' is not a timed name");
  const std::string digits = text.substr(at + 1);
  if (digits.size() > 9 ||
      digits.find_first_not_of("0123456789") != std::string::npos)
    throw ModelError("'" + text + "' is not a timed name");
  std::string base = text.substr(0, at);
  if (base.find('@') != std::string::npos)
    throw ModelError("'" + text + "' is not a timed name");
  return TimedName{std::move(base), std::stoi(digits)};
}

namespace {

const Cpt* cbn_cpt(const ConditionalBeliefNet& cbn, const std::string& child) {
  for (const Cpt& c : cbn.cpts)
    if (c.child == child) return &c;
  return nullptr;
}

const Distinction* combined_node(const ProjectionResult& pr,
                                 const std::string& base) {
  const auto it = pr.latest.find(base);
  if (it == pr.latest.end()) return nullptr;
  return find_node(pr.combined, it->second.render());
}

ProjectionResult start_from(const BeliefNetwork& state) {
  const ValidationReport report = validate_network(state);
  if (!report.valid())
    throw ModelError("state is invalid:\n" + report.to_string());
  ProjectionResult pr;
  for (const Distinction& d : state.nodes) {
    if (d.name.find('@') != std::string::npos)
      throw ModelError("state node '" + d.name + "' must not contain '@'");
    pr.latest.emplace(d.name, TimedName{d.name, 0});
    pr.persisted.insert(d.name);
  }
  auto renamed = [](const std::string& base) { return base + "@0"; };
  for (const Distinction& d : state.nodes)
    pr.combined.nodes.push_back(Distinction{renamed(d.name), d.domain});
  for (const Arc& a : state.arcs)
    pr.combined.arcs.push_back(Arc{renamed(a.from), renamed(a.to)});
  for (const Cpt& c : state.cpts) {
    Cpt copy{renamed(c.child), {}, c.rows};
    for (const std::string& p : c.parents) copy.parents.push_back(renamed(p));
    pr.combined.cpts.push_back(std::move(copy));
  }
  pr.combined.notes = state.notes;
  return pr;
}

// Appends one slice: effect copies with the action's tables, plus copies of
// `consequences` (base -> source table), parents re-pointed to the newest
// copy of each base.
void apply_transition(
    ProjectionResult& pr, const ActionModel& a,
    const std::vector<std::pair<std::string, const Cpt*>>& consequences,
    const ProjectionOptions& opts) {
  {
    const ValidationReport report = validate_action(a);
    if (!report.valid())
      throw ModelError("action '" + a.name + "' is invalid:\n" +
                       report.to_string());
  }
  const int slice = pr.latest_slice + 1;

  std::set<std::string> direct;
  for (const Distinction& bound : a.cbn.bound_nodes) {
    const std::string base = effect_base(bound.name);
    const Distinction* prev = combined_node(pr, base);
    if (prev == nullptr)
      throw ModelError("effect '" + base + "' is missing from the state");
    if (prev->domain != bound.domain)
      throw ModelError("action and state disagree on the domain of '" + base +
                       "'");
    direct.insert(base);
  }
  for (const Distinction& q : a.cbn.free_nodes) {
    const Distinction* prev = combined_node(pr, q.name);
    if (prev == nullptr)
      throw ModelError("qualifying node '" + q.name +
                       "' is missing from the state");
    if (prev->domain != q.domain)
      throw ModelError("action and state disagree on the domain of '" +
                       q.name + "'");
  }

  std::set<std::string> indirect;
  for (const auto& [base, cpt] : consequences) {
    if (direct.count(base)) continue;
    if (combined_node(pr, base) == nullptr)
      throw ModelError("indirect effect '" + base +
                       "' is missing from the state");
    indirect.insert(base);
  }

  auto fresh = [&](const std::string& base) {
    return TimedName{base, slice}.render();
  };
  // Parent bases copied this transition resolve to the new slice; everything
  // else resolves to its existing newest copy.
  auto newest = [&](const std::string& base) {
    if (direct.count(base) || indirect.count(base)) return fresh(base);
    const auto it = pr.latest.find(base);
    if (it == pr.latest.end())
      throw ModelError("parent '" + base + "' is missing from the state");
    return it->second.render();
  };
  auto add_node = [&](Distinction d) {
    if (find_node(pr.combined, d.name) != nullptr)
      throw ModelError("name collision on '" + d.name + "'");
    pr.combined.nodes.push_back(std::move(d));
  };

  std::vector<std::string> effect_copy_names;
  for (const Distinction& bound : a.cbn.bound_nodes) {
    const std::string base = effect_base(bound.name);
    add_node(Distinction{fresh(base), bound.domain});
    const Cpt* src = cbn_cpt(a.cbn, bound.name);
    Cpt copy{fresh(base), {}, src->rows};
    for (const std::string& p : src->parents) {
      const std::string target = is_effect_node_name(p)
                                     ? fresh(effect_base(p))
                                     : pr.latest.at(p).render();
      copy.parents.push_back(target);
      pr.combined.arcs.push_back(Arc{target, copy.child});
    }
    pr.combined.cpts.push_back(std::move(copy));
    effect_copy_names.push_back(fresh(base));
  }

  for (const auto& [base, src] : consequences) {
    if (direct.count(base)) continue;
    add_node(Distinction{fresh(base), combined_node(pr, base)->domain});
    Cpt copy{fresh(base), {}, src->rows};
    for (const std::string& p : src->parents) {
      const std::string target = newest(p);
      copy.parents.push_back(target);
      pr.combined.arcs.push_back(Arc{target, copy.child});
    }
    pr.combined.cpts.push_back(std::move(copy));
  }

  if (a.include_action_node) {
    const std::string marker = TimedName{a.name, slice}.render();
    add_node(Distinction{marker, {"performed"}});
    pr.combined.cpts.push_back(Cpt{marker, {}, {{1.0}}});
    // A single-valued parent appended last leaves row indexing untouched.
    for (const std::string& effect : effect_copy_names) {
      for (Cpt& c : pr.combined.cpts)
        if (c.child == effect) {
          c.parents.push_back(marker);
          break;
        }
      pr.combined.arcs.push_back(Arc{marker, effect});
    }
    pr.indicator_nodes.push_back(marker);
  }

  std::set<std::string> untouched;
  for (const auto& [base, copy] : pr.latest) {
    (void)copy;
    if (!direct.count(base) && !indirect.count(base)) untouched.insert(base);
  }
  if (opts.materialize_persisted) {
    for (const std::string& base : untouched) {
      const Distinction* prev = combined_node(pr, base);
      const std::size_t width = prev->domain.size();
      add_node(Distinction{fresh(base), prev->domain});
      std::vector<std::vector<double>> identity(
          width, std::vector<double>(width, 0.0));
      for (std::size_t i = 0; i < width; ++i) identity[i][i] = 1.0;
      const std::string prev_name = pr.latest.at(base).render();
      pr.combined.cpts.push_back(
          Cpt{fresh(base), {prev_name}, std::move(identity)});
      pr.combined.arcs.push_back(Arc{prev_name, fresh(base)});
    }
  }

  for (const std::string& base : direct) pr.latest[base] = {base, slice};
  for (const std::string& base : indirect) pr.latest[base] = {base, slice};
  if (opts.materialize_persisted)
    for (const std::string& base : untouched) pr.latest[base] = {base, slice};
  pr.direct_effects = std::move(direct);
  pr.indirect_effects = std::move(indirect);
  pr.persisted = std::move(untouched);
  pr.latest_slice = slice;
}

// Consequences for the modified rule: environment-graph descendants of the
// effect bases, tables from the environment.
std::vector<std::pair<std::string, const Cpt*>> environment_consequences(
    const ActionModel& a, const EnvironmentModel& v) {
  BeliefNetwork graph;
  graph.nodes = v.cbn.free_nodes;
  graph.nodes.insert(graph.nodes.end(), v.cbn.bound_nodes.begin(),
                     v.cbn.bound_nodes.end());
  graph.arcs = v.cbn.arcs;
  std::set<std::string> closure;
  for (const std::string& base : effects(a)) {
    const std::set<std::string> below = descendants(graph, base);
    closure.insert(below.begin(), below.end());
  }
  for (const std::string& base : effects(a)) closure.erase(base);
  std::vector<std::pair<std::string, const Cpt*>> out;
  for (const std::string& base : closure) {
    const Cpt* src = cbn_cpt(v.cbn, base);
    if (src == nullptr)
      throw ModelError("environment has no table for '" + base + "'");
    out.emplace_back(base, src);
  }
  return out;
}

void modified_step(ProjectionResult& pr, const ActionModel& a,
                   const EnvironmentModel& v, const ProjectionOptions& opts) {
  const CompatibilityReport fit = check_compatibility(a, v);
  if (!fit.compatible && !opts.allow_incompatible) {
    std::string names;
    for (const std::string& b : fit.bound_effects)
      names += (names.empty() ? "" : ", ") + b;
    throw IncompatibleError("action '" + a.name +
                            "' rewrites distinctions the environment "
                            "explains: " +
                            names);
  }
  apply_transition(pr, a, environment_consequences(a, v), opts);
}

}  // namespace

ProjectionResult project_original(const BeliefNetwork& state,
                                  const ActionModel& a,
                                  const ProjectionOptions& opts) {
  ProjectionResult pr = start_from(state);
  std::set<std::string> closure;
  for (const std::string& base : effects(a)) {
    if (find_node(state, base) == nullptr)
      throw ModelError("effect '" + base + "' is missing from the state");
    const std::set<std::string> below = descendants(state, base);
    closure.insert(below.begin(), below.end());
  }
  for (const std::string& base : effects(a)) closure.erase(base);
  std::vector<std::pair<std::string, const Cpt*>> consequences;
  for (const std::string& base : closure)
    consequences.emplace_back(base, find_cpt(state, base));
  apply_transition(pr, a, consequences, opts);
  return pr;
}

ProjectionResult project_modified(const BeliefNetwork& state,
                                  const ActionModel& a,
                                  const EnvironmentModel& v,
                                  const ProjectionOptions& opts) {
  {
    const ValidationReport report = validate_environment(v);
    if (!report.valid())
      throw ModelError("environment is invalid:\n" + report.to_string());
  }
  ProjectionResult pr = start_from(state);
  modified_step(pr, a, v, opts);
  return pr;
}

ProjectionResult project_sequence(const BeliefNetwork& state,
                                  const std::vector<ActionModel>& actions,
                                  const EnvironmentModel& v,
                                  const ProjectionOptions& opts) {
  {
    const ValidationReport report = validate_environment(v);
    if (!report.valid())
      throw ModelError("environment is invalid:\n" + report.to_string());
  }
  ProjectionResult pr = start_from(state);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    auto where = [&](const char* what) {
      return "action " + std::to_string(i + 1) + " ('" + actions[i].name +
             "'): " + what;
    };
    try {
      modified_step(pr, actions[i], v, opts);
    } catch (const IncompatibleError& e) {
      throw IncompatibleError(where(e.what()));
    } catch (const ModelError& e) {
      throw ModelError(where(e.what()));
    }
  }
  return pr;
}

BeliefNetwork extract_successor(const ProjectionResult& pr) {
  BeliefNetwork net = pr.combined;

  // Indicator nodes are single-valued, so dropping one from a parent list
  // never reorders table rows.
  const std::set<std::string> markers(pr.indicator_nodes.begin(),
                                      pr.indicator_nodes.end());
  if (!markers.empty()) {
    std::erase_if(net.nodes, [&](const Distinction& d) {
      return markers.count(d.name) != 0;
    });
    std::erase_if(net.cpts,
                  [&](const Cpt& c) { return markers.count(c.child) != 0; });
    std::erase_if(net.arcs, [&](const Arc& a) {
      return markers.count(a.from) != 0 || markers.count(a.to) != 0;
    });
    for (Cpt& c : net.cpts)
      std::erase_if(c.parents, [&](const std::string& p) {
        return markers.count(p) != 0;
      });
  }

  std::set<std::string> stale;
  for (const Distinction& d : net.nodes) {
    const TimedName t = TimedName::parse(d.name);
    const auto it = pr.latest.find(t.base);
    if (it == pr.latest.end())
      throw ModelError("combined network holds a copy of unknown base '" +
                       t.base + "'");
    if (it->second.slice != t.slice) stale.insert(d.name);
  }
  net = remove_nodes(net, stale);

  auto bare = [&](const std::string& name) {
    return TimedName::parse(name).base;
  };
  for (Distinction& d : net.nodes) d.name = bare(d.name);
  for (Arc& a : net.arcs) {
    a.from = bare(a.from);
    a.to = bare(a.to);
  }
  for (Cpt& c : net.cpts) {
    c.child = bare(c.child);
    for (std::string& p : c.parents) p = bare(p);
  }
  return net;
}

}  // namespace probact
