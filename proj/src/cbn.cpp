#include "probact/cbn.hpp"

#include <algorithm>
#include <set>

namespace probact {

namespace {

// A fragment is checked as a full network with a synthetic uniform prior on
// each free node, so all the table rules apply verbatim to the bound part.
BeliefNetwork with_uniform_priors(const ConditionalBeliefNet& cbn,
                                  const std::set<std::string>& free_names,
                                  const std::set<Arc>& dropped) {
  BeliefNetwork bn;
  bn.nodes = cbn.free_nodes;
  bn.nodes.insert(bn.nodes.end(), cbn.bound_nodes.begin(),
                  cbn.bound_nodes.end());
  for (const Arc& a : cbn.arcs)
    if (!dropped.count(a)) bn.arcs.push_back(a);
  for (const Distinction& d : cbn.free_nodes) {
    if (d.domain.empty()) continue;  // reported by the node checks
    const double p = 1.0 / static_cast<double>(d.domain.size());
    bn.cpts.push_back(Cpt{d.name, {}, {std::vector<double>(d.domain.size(), p)}});
  }
  for (const Cpt& c : cbn.cpts)
    if (!free_names.count(c.child)) bn.cpts.push_back(c);
  return bn;
}

}  // namespace

ValidationReport validate_cbn(const ConditionalBeliefNet& cbn) {
  ValidationReport report;
  std::set<std::string> free_names;
  for (const Distinction& d : cbn.free_nodes) free_names.insert(d.name);

  std::set<Arc> dropped;
  for (const Arc& a : cbn.arcs)
    if (free_names.count(a.to)) {
      report.entries.push_back({Severity::error, "arc_into_free", a.to,
                                "arc '" + a.from + "' -> '" + a.to +
                                    "' ends in the free node '" + a.to + "'"});
      dropped.insert(a);
    }
  for (const Cpt& c : cbn.cpts)
    if (free_names.count(c.child))
      report.entries.push_back({Severity::error, "cpt_for_free", c.child,
                                "free node '" + c.child +
                                    "' must not carry a table"});

  const ValidationReport inner =
      validate_network(with_uniform_priors(cbn, free_names, dropped));
  report.entries.insert(report.entries.end(), inner.entries.begin(),
                        inner.entries.end());
  return report;
}

BeliefNetwork bind(const ConditionalBeliefNet& cbn,
                   const BeliefNetwork& prior) {
  const ValidationReport fragment_report = validate_cbn(cbn);
  if (!fragment_report.valid())
    throw ModelError("fragment is invalid:\n" + fragment_report.to_string());
  const ValidationReport prior_report = validate_network(prior);
  if (!prior_report.valid())
    throw ModelError("prior is invalid:\n" + prior_report.to_string());

  std::set<std::string> prior_names;
  for (const Distinction& d : prior.nodes) prior_names.insert(d.name);
  std::set<std::string> free_names;
  for (const Distinction& d : cbn.free_nodes) free_names.insert(d.name);
  if (prior_names != free_names)
    throw ModelError("prior must cover exactly the free nodes");
  for (const Distinction& d : cbn.free_nodes) {
    const Distinction* p = find_node(prior, d.name);
    if (p->domain != d.domain)
      throw ModelError("prior and fragment disagree on the domain of '" +
                       d.name + "'");
  }

  BeliefNetwork out;
  out.nodes = prior.nodes;
  out.nodes.insert(out.nodes.end(), cbn.bound_nodes.begin(),
                   cbn.bound_nodes.end());
  out.arcs = prior.arcs;
  out.arcs.insert(out.arcs.end(), cbn.arcs.begin(), cbn.arcs.end());
  out.cpts = prior.cpts;
  out.cpts.insert(out.cpts.end(), cbn.cpts.begin(), cbn.cpts.end());
  out.notes = cbn.notes;

  const ValidationReport report = validate_network(out);
  if (!report.valid())
    throw ModelError("bound network is invalid:\n" + report.to_string());
  return out;
}

}  // namespace probact
