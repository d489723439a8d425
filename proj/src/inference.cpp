#include "probact/inference.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "probact/factor.hpp"
#include "probact/network.hpp"

namespace probact {

namespace {

struct Query {
  std::vector<std::string> targets;  // sorted, unique
  std::map<std::string, std::size_t> evidence_index;
};

Query resolve_query(const BeliefNetwork& bn,
                    const std::vector<std::string>& targets,
                    const Assignment& evidence) {
  if (targets.empty()) throw ModelError("query needs at least one target");
  Query q;
  q.targets = targets;
  std::sort(q.targets.begin(), q.targets.end());
  if (std::adjacent_find(q.targets.begin(), q.targets.end()) !=
      q.targets.end())
    throw ModelError("query lists a target twice");
  for (const std::string& t : q.targets)
    if (find_node(bn, t) == nullptr)
      throw ModelError("unknown target node '" + t + "'");
  for (const auto& [node, value] : evidence) {
    const Distinction* d = find_node(bn, node);
    if (d == nullptr) throw ModelError("unknown evidence node '" + node + "'");
    q.evidence_index.emplace(node, domain_index(*d, value));
  }
  return q;
}

Dist dist_from(const BeliefNetwork& bn, const Query& q,
               std::vector<double> values) {
  Dist out;
  for (const std::string& t : q.targets) out.scope.push_back(*find_node(bn, t));
  out.probabilities = std::move(values);
  return out;
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double Dist::at(const Assignment& where) const {
  std::size_t idx = 0;
  for (const Distinction& d : scope) {
    const auto it = where.find(d.name);
    if (it == where.end())
      throw ModelError("assignment is missing '" + d.name + "'");
    idx = idx * d.domain.size() + domain_index(d, it->second);
  }
  return probabilities[idx];
}

double joint_probability(const BeliefNetwork& bn, const Assignment& a) {
  auto value_index = [&](const std::string& node) {
    const Distinction* d = find_node(bn, node);
    if (d == nullptr) throw ModelError("unknown node '" + node + "'");
    const auto it = a.find(node);
    if (it == a.end()) throw ModelError("assignment is missing '" + node + "'");
    return domain_index(*d, it->second);
  };
  double p = 1.0;
  for (const Distinction& d : bn.nodes) {
    const Cpt* cpt = find_cpt(bn, d.name);
    if (cpt == nullptr) throw ModelError("node '" + d.name + "' has no table");
    std::size_t row = 0;
    for (const std::string& parent : cpt->parents) {
      const Distinction* pd = find_node(bn, parent);
      if (pd == nullptr)
        throw ModelError("table for '" + d.name +
                         "' conditions on unknown node '" + parent + "'");
      row = row * pd->domain.size() + value_index(parent);
    }
    p *= cpt->rows[row][value_index(d.name)];
  }
  return p;
}

Dist marginal(const BeliefNetwork& bn, const std::vector<std::string>& targets,
              const Assignment& evidence) {
  const Query q = resolve_query(bn, targets, evidence);

  std::vector<Factor> factors;
  factors.reserve(bn.cpts.size());
  for (const Distinction& d : bn.nodes) {
    const Cpt* cpt = find_cpt(bn, d.name);
    if (cpt == nullptr) throw ModelError("node '" + d.name + "' has no table");
    Factor f = factor_from_cpt(bn, *cpt);
    for (const auto& [node, value_idx] : q.evidence_index)
      if (f.contains(node)) f = reduce(f, node, value_idx);
    factors.push_back(std::move(f));
  }

  std::set<std::string> to_eliminate;
  for (const Distinction& d : bn.nodes)
    if (!q.evidence_index.count(d.name) &&
        std::find(q.targets.begin(), q.targets.end(), d.name) ==
            q.targets.end())
      to_eliminate.insert(d.name);

  while (!to_eliminate.empty()) {
    // Min-degree: fewest distinct neighbors across the factors that mention
    // the variable; ties go to the lexicographically first name.
    std::string best;
    std::size_t best_degree = std::numeric_limits<std::size_t>::max();
    for (const std::string& v : to_eliminate) {
      std::set<std::string> neighbors;
      for (const Factor& f : factors)
        if (f.contains(v))
          neighbors.insert(f.scope.begin(), f.scope.end());
      neighbors.erase(v);
      if (neighbors.size() < best_degree) {
        best_degree = neighbors.size();
        best = v;
      }
    }
    to_eliminate.erase(best);

    Factor combined = unit_factor();
    std::vector<Factor> rest;
    rest.reserve(factors.size());
    for (Factor& f : factors) {
      if (f.contains(best))
        combined = product(combined, f);
      else
        rest.push_back(std::move(f));
    }
    rest.push_back(marginalize(combined, best));
    factors = std::move(rest);
  }

  Factor joint = unit_factor();
  for (const Factor& f : factors) joint = product(joint, f);
  if (!(total_mass(joint) > 0.0))
    throw ZeroEvidenceError("evidence has zero probability");
  normalize_in_place(joint);

  // Targets that are also evidence come back as point masses.
  for (const std::string& t : q.targets) {
    const auto ev = q.evidence_index.find(t);
    if (ev == q.evidence_index.end()) continue;
    const Distinction* d = find_node(bn, t);
    Factor point{{t}, {d->domain.size()},
                 std::vector<double>(d->domain.size(), 0.0)};
    point.values[ev->second] = 1.0;
    joint = product(joint, point);
  }
  joint = transposed(joint, q.targets);
  return dist_from(bn, q, std::move(joint.values));
}

Dist enumerate_marginal(const BeliefNetwork& bn,
                        const std::vector<std::string>& targets,
                        const Assignment& evidence, std::size_t max_states) {
  const Query q = resolve_query(bn, targets, evidence);

  const std::size_t n = bn.nodes.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i)
    if (!index.emplace(bn.nodes[i].name, i).second)
      throw ModelError("duplicate node name '" + bn.nodes[i].name + "'");

  std::size_t states = 1;
  for (const Distinction& d : bn.nodes) {
    if (d.domain.empty())
      throw ModelError("node '" + d.name + "' has no domain values");
    if (states > max_states / d.domain.size())
      throw LimitError("joint state space exceeds the enumeration limit of " +
                       std::to_string(max_states) + " states");
    states *= d.domain.size();
  }

  // Per-node table hookup, all by index so the state loop is arithmetic only.
  struct Slot {
    const Cpt* cpt;
    std::vector<std::size_t> parent_of;  // node index per listed parent
    std::vector<std::size_t> parent_card;
  };
  std::vector<Slot> slots(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Cpt* cpt = find_cpt(bn, bn.nodes[i].name);
    if (cpt == nullptr)
      throw ModelError("node '" + bn.nodes[i].name + "' has no table");
    Slot& s = slots[i];
    s.cpt = cpt;
    for (const std::string& parent : cpt->parents) {
      const auto it = index.find(parent);
      if (it == index.end())
        throw ModelError("table for '" + bn.nodes[i].name +
                         "' conditions on unknown node '" + parent + "'");
      s.parent_of.push_back(it->second);
      s.parent_card.push_back(bn.nodes[it->second].domain.size());
    }
  }

  std::vector<std::size_t> lo(n, 0), hi(n);
  for (std::size_t i = 0; i < n; ++i) hi[i] = bn.nodes[i].domain.size() - 1;
  for (const auto& [node, value_idx] : q.evidence_index) {
    lo[index.at(node)] = value_idx;
    hi[index.at(node)] = value_idx;
  }

  std::vector<std::size_t> target_of;  // node index per sorted target
  std::size_t cells = 1;
  for (const std::string& t : q.targets) {
    target_of.push_back(index.at(t));
    cells *= bn.nodes[index.at(t)].domain.size();
  }
  std::vector<double> accum(cells, 0.0);

  std::vector<std::size_t> digit = lo;
  for (;;) {
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Slot& s = slots[i];
      std::size_t row = 0;
      for (std::size_t k = 0; k < s.parent_of.size(); ++k)
        row = row * s.parent_card[k] + digit[s.parent_of[k]];
      p *= s.cpt->rows[row][digit[i]];
    }
    std::size_t cell = 0;
    for (std::size_t t : target_of)
      cell = cell * bn.nodes[t].domain.size() + digit[t];
    accum[cell] += p;

    std::size_t i = n;
    while (i-- > 0) {
      if (digit[i] < hi[i]) {
        ++digit[i];
        break;
      }
      digit[i] = lo[i];
    }
    if (i == std::numeric_limits<std::size_t>::max()) break;
  }

  double z = 0.0;
  for (double v : accum) z += v;
  if (!(z > 0.0)) throw ZeroEvidenceError("evidence has zero probability");
  for (double& v : accum) v /= z;
  return dist_from(bn, q, std::move(accum));
}

std::vector<Assignment> forward_sample(const BeliefNetwork& bn, std::size_t n,
                                       std::uint64_t seed) {
  const std::vector<std::string> order = topological_order(bn);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < bn.nodes.size(); ++i)
    index.emplace(bn.nodes[i].name, i);

  struct Slot {
    std::size_t node;
    const Cpt* cpt;
    std::vector<std::size_t> parent_of;
    std::vector<std::size_t> parent_card;
  };
  std::vector<Slot> plan;
  plan.reserve(order.size());
  for (const std::string& node : order) {
    const Cpt* cpt = find_cpt(bn, node);
    if (cpt == nullptr) throw ModelError("node '" + node + "' has no table");
    Slot s{index.at(node), cpt, {}, {}};
    for (const std::string& parent : cpt->parents) {
      const auto it = index.find(parent);
      if (it == index.end())
        throw ModelError("table for '" + node +
                         "' conditions on unknown node '" + parent + "'");
      s.parent_of.push_back(it->second);
      s.parent_card.push_back(bn.nodes[it->second].domain.size());
    }
    plan.push_back(std::move(s));
  }

  std::mt19937_64 rng(seed);
  std::vector<Assignment> samples;
  samples.reserve(n);
  std::vector<std::size_t> digit(bn.nodes.size(), 0);
  for (std::size_t s = 0; s < n; ++s) {
    for (const Slot& slot : plan) {
      std::size_t row = 0;
      for (std::size_t k = 0; k < slot.parent_of.size(); ++k)
        row = row * slot.parent_card[k] + digit[slot.parent_of[k]];
      const std::vector<double>& dist = slot.cpt->rows[row];
      const double u = unit_uniform(rng);
      double cum = 0.0;
      std::size_t pick = dist.size() - 1;
      for (std::size_t v = 0; v < dist.size(); ++v) {
        cum += dist[v];
        if (u < cum) {
          pick = v;
          break;
        }
      }
      digit[slot.node] = pick;
    }
    Assignment a;
    for (std::size_t i = 0; i < bn.nodes.size(); ++i)
      a.emplace(bn.nodes[i].name, bn.nodes[i].domain[digit[i]]);
    samples.push_back(std::move(a));
  }
  return samples;
}

}  // namespace probact
