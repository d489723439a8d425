#include "probact/model.hpp"

#include <algorithm>

namespace probact {

const Distinction* find_node(const BeliefNetwork& bn, const std::string& name) {
  for (const Distinction& d : bn.nodes)
    if (d.name == name) return &d;
  return nullptr;
}

const Cpt* find_cpt(const BeliefNetwork& bn, const std::string& child) {
  for (const Cpt& c : bn.cpts)
    if (c.child == child) return &c;
  return nullptr;
}

std::size_t domain_index(const Distinction& d, const std::string& value) {
  const auto it = std::find(d.domain.begin(), d.domain.end(), value);
  if (it == d.domain.end())
    throw ModelError("value '" + value + "' is not in the domain of '" +
                     d.name + "'");
  return static_cast<std::size_t>(it - d.domain.begin());
}

BeliefNetwork canonicalized(const BeliefNetwork& bn) {
  BeliefNetwork out = bn;
  std::sort(out.nodes.begin(), out.nodes.end(),
            [](const Distinction& a, const Distinction& b) {
              return a.name < b.name;
            });
  std::sort(out.arcs.begin(), out.arcs.end());
  std::sort(out.cpts.begin(), out.cpts.end(),
            [](const Cpt& a, const Cpt& b) { return a.child < b.child; });
  return out;
}

bool structurally_equal(const BeliefNetwork& a, const BeliefNetwork& b) {
  const BeliefNetwork ca = canonicalized(a);
  const BeliefNetwork cb = canonicalized(b);
  return ca.nodes == cb.nodes && ca.arcs == cb.arcs && ca.cpts == cb.cpts;
}

}  // namespace probact
