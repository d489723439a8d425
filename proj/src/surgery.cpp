#include "probact/surgery.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <vector>

#include "compiled.hpp"
#include "probact/factor.hpp"
#include "probact/kernels.hpp"
#include "probact/network.hpp"

namespace probact {

namespace {

std::vector<std::vector<double>> rows_from(const Factor& f) {
  const std::size_t width = f.card.back();
  std::vector<std::vector<double>> rows;
  rows.reserve(f.values.size() / width);
  for (std::size_t off = 0; off < f.values.size(); off += width)
    rows.emplace_back(f.values.begin() + static_cast<std::ptrdiff_t>(off),
                      f.values.begin() + static_cast<std::ptrdiff_t>(off + width));
  return rows;
}

void replace_cpt(BeliefNetwork& bn, Cpt cpt) {
  for (Cpt& c : bn.cpts)
    if (c.child == cpt.child) {
      c = std::move(cpt);
      return;
    }
  throw ModelError("node '" + cpt.child + "' has no table");
}

}  // namespace

BeliefNetwork reverse_arc(const BeliefNetwork& bn, const std::string& u,
                          const std::string& v) {
  if (u == v) throw ModelError("cannot reverse a self arc on '" + u + "'");
  const detail::CompiledNet view = detail::CompiledNet::build(bn);
  const std::size_t ui = view.at(u), vi = view.at(v);
  if (!std::binary_search(view.children[ui].begin(), view.children[ui].end(),
                          vi))
    throw ModelError("no arc '" + u + "' -> '" + v + "' to reverse");

  // Any second directed path u ~> v would turn into a cycle.
  {
    std::vector<char> seen(bn.nodes.size(), 0);
    std::deque<std::size_t> frontier;
    for (std::size_t c : view.children[ui])
      if (c != vi) {
        seen[c] = 1;
        frontier.push_back(c);
      }
    while (!frontier.empty()) {
      const std::size_t w = frontier.front();
      frontier.pop_front();
      if (w == vi)
        throw ModelError("reversing '" + u + "' -> '" + v +
                         "' would create a cycle");
      for (std::size_t c : view.children[w])
        if (!seen[c]) {
          seen[c] = 1;
          frontier.push_back(c);
        }
    }
  }

  const Cpt* cpt_u = find_cpt(bn, u);
  const Cpt* cpt_v = find_cpt(bn, v);
  if (cpt_u == nullptr || cpt_v == nullptr)
    throw ModelError("both ends of the arc need tables");
  const Factor f_u = factor_from_cpt(bn, *cpt_u);
  const Factor f_v = factor_from_cpt(bn, *cpt_v);
  const Factor joint = product(f_u, f_v);
  const Factor v_given_rest = marginalize(joint, u);

  std::set<std::string> inherited;  // union of both old parent sets, minus u
  inherited.insert(cpt_u->parents.begin(), cpt_u->parents.end());
  for (const std::string& p : cpt_v->parents)
    if (p != u) inherited.insert(p);

  const std::vector<std::string> v_parents(inherited.begin(), inherited.end());
  std::set<std::string> with_v = inherited;
  with_v.insert(v);
  const std::vector<std::string> u_parents(with_v.begin(), with_v.end());

  std::vector<std::string> v_layout = v_parents;
  v_layout.push_back(v);
  Cpt new_v{v, v_parents, rows_from(transposed(v_given_rest, v_layout))};

  std::vector<std::string> u_layout = u_parents;
  u_layout.push_back(u);
  Factor f_new_u = transposed(joint, u_layout);
  const std::size_t cu = f_new_u.card.back();
  std::vector<std::vector<double>> u_rows = rows_from(f_new_u);
  for (std::vector<double>& row : u_rows) {
    const double denom = kern::sum(row);
    if (denom == 0.0)
      std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(cu));
    else
      kern::scale(row, 1.0 / denom);
  }
  Cpt new_u{u, u_parents, std::move(u_rows)};

  BeliefNetwork out = bn;
  replace_cpt(out, std::move(new_v));
  replace_cpt(out, std::move(new_u));
  std::set<Arc> arcs(bn.arcs.begin(), bn.arcs.end());
  arcs.erase(Arc{u, v});
  arcs.insert(Arc{v, u});
  for (const std::string& p : inherited) {
    arcs.insert(Arc{p, u});
    arcs.insert(Arc{p, v});
  }
  out.arcs.assign(arcs.begin(), arcs.end());
  return out;
}

BeliefNetwork remove_node(const BeliefNetwork& bn, const std::string& name) {
  if (find_node(bn, name) == nullptr)
    throw ModelError("unknown node '" + name + "'");
  BeliefNetwork cur = bn;
  for (;;) {
    std::set<std::string> kids;
    for (const Arc& a : cur.arcs)
      if (a.from == name) kids.insert(a.to);
    if (kids.empty()) break;
    const std::vector<std::string> order = topological_order(cur);
    std::string first;
    for (const std::string& node : order)
      if (kids.count(node)) {
        first = node;
        break;
      }
    cur = reverse_arc(cur, name, first);
  }
  std::erase_if(cur.nodes,
                [&](const Distinction& d) { return d.name == name; });
  std::erase_if(cur.cpts, [&](const Cpt& c) { return c.child == name; });
  std::erase_if(cur.arcs,
                [&](const Arc& a) { return a.from == name || a.to == name; });
  return cur;
}

BeliefNetwork remove_nodes(const BeliefNetwork& bn,
                           const std::set<std::string>& names) {
  for (const std::string& name : names)
    if (find_node(bn, name) == nullptr)
      throw ModelError("unknown node '" + name + "'");
  const std::vector<std::string> order = topological_order(bn);
  BeliefNetwork cur = bn;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (names.count(*it)) cur = remove_node(cur, *it);
  return cur;
}

}  // namespace probact
