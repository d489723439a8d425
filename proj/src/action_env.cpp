#include "probact/action.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "probact/inference.hpp"
#include "probact/kernels.hpp"

namespace probact {

namespace {

const std::string kSuffix = kNextSuffix;

const Distinction* find_in(const std::vector<Distinction>& nodes,
                           const std::string& name) {
  for (const Distinction& d : nodes)
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace

std::string effect_node_name(const std::string& base) { return base + kSuffix; }

bool is_effect_node_name(const std::string& node) {
  return node.size() > kSuffix.size() &&
         node.compare(node.size() - kSuffix.size(), kSuffix.size(), kSuffix) ==
             0;
}

std::string effect_base(const std::string& node) {
  if (!is_effect_node_name(node))
    throw ModelError("'" + node + "' is not an effect node name");
  return node.substr(0, node.size() - kSuffix.size());
}

std::vector<std::string> qualification(const ActionModel& a) {
  std::vector<std::string> out;
  out.reserve(a.cbn.free_nodes.size());
  for (const Distinction& d : a.cbn.free_nodes) out.push_back(d.name);
  return out;
}

std::vector<std::string> effects(const ActionModel& a) {
  std::vector<std::string> out;
  out.reserve(a.cbn.bound_nodes.size());
  for (const Distinction& d : a.cbn.bound_nodes)
    if (is_effect_node_name(d.name)) out.push_back(effect_base(d.name));
  return out;
}

ValidationReport validate_action(const ActionModel& a) {
  ValidationReport report = validate_cbn(a.cbn);
  auto add = [&](Severity s, std::string code, std::string where,
                 std::string message) {
    report.entries.push_back(
        {s, std::move(code), std::move(where), std::move(message)});
  };
  if (a.name.empty())
    add(Severity::error, "empty_action_name", "", "action has no name");
  for (const Distinction& d : a.cbn.free_nodes)
    if (d.name.find('@') != std::string::npos)
      add(Severity::error, "bad_qual_name", d.name,
          "qualifying node '" + d.name + "' must not contain '@'");
  for (const Distinction& d : a.cbn.bound_nodes) {
    if (!is_effect_node_name(d.name)) {
      add(Severity::error, "bad_effect_name", d.name,
          "bound node '" + d.name + "' must be named '<base>" + kSuffix + "'");
      continue;
    }
    const std::string base = effect_base(d.name);
    if (base.empty() || base.find('@') != std::string::npos)
      add(Severity::error, "bad_effect_name", d.name,
          "effect base of '" + d.name + "' must be nonempty and free of '@'");
  }
  if (a.cbn.bound_nodes.empty())
    add(Severity::warning, "no_effects", a.name,
        "action '" + a.name + "' changes nothing");
  return report;
}

ValidationReport validate_environment(const EnvironmentModel& v) {
  ValidationReport report = validate_cbn(v.cbn);
  auto check_names = [&](const std::vector<Distinction>& nodes) {
    for (const Distinction& d : nodes)
      if (d.name.find('@') != std::string::npos)
        report.entries.push_back(
            {Severity::error, "bad_distinction_name", d.name,
             "distinction '" + d.name + "' must not contain '@'"});
  };
  check_names(v.cbn.free_nodes);
  check_names(v.cbn.bound_nodes);
  return report;
}

CompatibilityReport check_compatibility(const ActionModel& a,
                                        const EnvironmentModel& v) {
  std::set<std::string> bound_names;
  for (const Distinction& d : v.cbn.bound_nodes) bound_names.insert(d.name);
  auto env_node = [&](const std::string& name) -> const Distinction* {
    if (const Distinction* d = find_in(v.cbn.free_nodes, name)) return d;
    return find_in(v.cbn.bound_nodes, name);
  };

  for (const Distinction& q : a.cbn.free_nodes) {
    const Distinction* d = env_node(q.name);
    if (d == nullptr)
      throw ModelError("qualifying node '" + q.name +
                       "' is unknown to the environment");
    if (d->domain != q.domain)
      throw ModelError("action and environment disagree on the domain of '" +
                       q.name + "'");
  }

  CompatibilityReport report;
  for (const Distinction& b : a.cbn.bound_nodes) {
    const std::string base = effect_base(b.name);
    const Distinction* d = env_node(base);
    if (d == nullptr)
      throw ModelError("effect '" + base + "' is unknown to the environment");
    if (d->domain != b.domain)
      throw ModelError("action and environment disagree on the domain of '" +
                       base + "'");
    if (bound_names.count(base)) report.bound_effects.push_back(base);
  }
  report.compatible = report.bound_effects.empty();
  return report;
}

ConsistencyReport check_consistency(const BeliefNetwork& w,
                                    const EnvironmentModel& v, double tol) {
  if (!(tol > 0.0)) throw ModelError("consistency tolerance must be positive");
  {
    const ValidationReport r = validate_network(w);
    if (!r.valid()) throw ModelError("state is invalid:\n" + r.to_string());
    const ValidationReport rv = validate_environment(v);
    if (!rv.valid())
      throw ModelError("environment is invalid:\n" + rv.to_string());
  }
  std::map<std::string, const Distinction*> env_nodes;
  for (const Distinction& d : v.cbn.free_nodes) env_nodes.emplace(d.name, &d);
  for (const Distinction& d : v.cbn.bound_nodes) env_nodes.emplace(d.name, &d);
  if (w.nodes.size() != env_nodes.size())
    throw ModelError("state and environment cover different distinctions");
  for (const Distinction& d : w.nodes) {
    const auto it = env_nodes.find(d.name);
    if (it == env_nodes.end())
      throw ModelError("state node '" + d.name +
                       "' is unknown to the environment");
    if (it->second->domain != d.domain)
      throw ModelError("state and environment disagree on the domain of '" +
                       d.name + "'");
  }

  ConsistencyReport report;
  report.tol = tol;
  for (const Cpt& cpt : v.cbn.cpts) {
    ConsistencyNode entry;
    entry.node = cpt.child;
    std::vector<const Distinction*> parents;
    for (const std::string& p : cpt.parents) parents.push_back(env_nodes.at(p));
    std::vector<std::size_t> digit(parents.size(), 0);
    for (std::size_t row = 0; row < cpt.rows.size(); ++row) {
      Assignment evidence;
      for (std::size_t k = 0; k < parents.size(); ++k)
        evidence.emplace(parents[k]->name, parents[k]->domain[digit[k]]);
      try {
        const Dist posterior = marginal(w, {cpt.child}, evidence);
        const double diff =
            kern::max_abs_diff(posterior.probabilities, cpt.rows[row]);
        entry.worst = std::max(entry.worst, diff);
        ++entry.rows_checked;
      } catch (const ZeroEvidenceError&) {
        ++entry.rows_unverifiable;
      }
      for (std::size_t k = parents.size(); k-- > 0;) {
        if (++digit[k] < parents[k]->domain.size()) break;
        digit[k] = 0;
      }
    }
    report.worst = std::max(report.worst, entry.worst);
    report.nodes.push_back(std::move(entry));
  }
  report.consistent = report.worst <= tol;
  return report;
}

}  // namespace probact
