#include "probact/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <utility>

#include "compiled.hpp"
#include "probact/kernels.hpp"

namespace probact {

namespace detail {

CompiledNet CompiledNet::build(const BeliefNetwork& bn) {
  CompiledNet v;
  v.net = &bn;
  for (std::size_t i = 0; i < bn.nodes.size(); ++i)
    if (!v.index.emplace(bn.nodes[i].name, i).second)
      throw ModelError("duplicate node name '" + bn.nodes[i].name + "'");
  v.parents.resize(bn.nodes.size());
  v.children.resize(bn.nodes.size());
  for (const Arc& a : bn.arcs) {
    const auto f = v.index.find(a.from);
    const auto t = v.index.find(a.to);
    if (f == v.index.end() || t == v.index.end())
      throw ModelError("arc '" + a.from + "' -> '" + a.to +
                       "' references an unknown node");
    v.parents[t->second].push_back(f->second);
    v.children[f->second].push_back(t->second);
  }
  auto dedupe = [](std::vector<std::size_t>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  };
  for (auto& xs : v.parents) dedupe(xs);
  for (auto& xs : v.children) dedupe(xs);
  return v;
}

std::size_t CompiledNet::at(const std::string& node) const {
  const auto it = index.find(node);
  if (it == index.end()) throw ModelError("unknown node '" + node + "'");
  return it->second;
}

}  // namespace detail

bool ValidationReport::valid() const {
  for (const Violation& v : entries)
    if (v.severity == Severity::error) return false;
  return true;
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const Violation& v : entries) {
    out += v.severity == Severity::error ? "error" : "warning";
    out += " [" + v.code + "]";
    if (!v.where.empty()) out += " " + v.where;
    out += ": " + v.message + "\n";
  }
  return out;
}

namespace {

// Saturating product; row counts past this can never match a real table.
std::size_t sat_mul(std::size_t a, std::size_t b) {
  constexpr std::size_t cap = std::numeric_limits<std::size_t>::max();
  if (b != 0 && a > cap / b) return cap;
  return a * b;
}

struct LintItem {
  const Cpt* cpt;
  std::vector<const Distinction*> parents;
};

}  // namespace

ValidationReport validate_network(const BeliefNetwork& bn) {
  ValidationReport report;
  auto add = [&](Severity s, std::string code, std::string where,
                 std::string message) {
    report.entries.push_back(
        {s, std::move(code), std::move(where), std::move(message)});
  };

  std::map<std::string, const Distinction*> byname;
  bool graph_ok = true;
  for (std::size_t i = 0; i < bn.nodes.size(); ++i) {
    const Distinction& d = bn.nodes[i];
    if (d.name.empty()) {
      add(Severity::error, "empty_name", "",
          "node " + std::to_string(i) + " has an empty name");
      graph_ok = false;
      continue;
    }
    if (!byname.emplace(d.name, &d).second) {
      add(Severity::error, "duplicate_node", d.name,
          "node '" + d.name + "' is declared more than once");
      graph_ok = false;
      continue;
    }
    if (d.domain.empty())
      add(Severity::error, "empty_domain", d.name,
          "node '" + d.name + "' has no domain values");
    else if (d.domain.size() == 1)
      add(Severity::warning, "degenerate_domain", d.name,
          "node '" + d.name + "' has a single-valued domain");
    std::set<std::string> seen;
    for (const std::string& value : d.domain)
      if (!seen.insert(value).second)
        add(Severity::error, "duplicate_value", d.name,
            "node '" + d.name + "' repeats domain value '" + value + "'");
  }

  std::set<Arc> arcs;
  for (const Arc& a : bn.arcs) {
    bool endpoints_ok = true;
    if (byname.find(a.from) == byname.end()) {
      add(Severity::error, "dangling_arc", a.from,
          "arc '" + a.from + "' -> '" + a.to + "' starts at an unknown node");
      endpoints_ok = false;
    }
    if (byname.find(a.to) == byname.end()) {
      add(Severity::error, "dangling_arc", a.to,
          "arc '" + a.from + "' -> '" + a.to + "' ends at an unknown node");
      endpoints_ok = false;
    }
    if (endpoints_ok && !arcs.insert(a).second)
      add(Severity::error, "duplicate_arc", a.to,
          "arc '" + a.from + "' -> '" + a.to + "' is listed more than once");
    graph_ok = graph_ok && endpoints_ok;
  }

  std::map<std::string, std::vector<std::string>> arc_parents;
  for (const Arc& a : arcs) arc_parents[a.to].push_back(a.from);

  std::vector<LintItem> lintable;
  std::set<std::string> tabled;
  for (const Cpt& c : bn.cpts) {
    const auto child_it = byname.find(c.child);
    if (child_it == byname.end()) {
      add(Severity::error, "extra_cpt", c.child,
          "table for unknown node '" + c.child + "'");
      continue;
    }
    if (!tabled.insert(c.child).second) {
      add(Severity::error, "duplicate_cpt", c.child,
          "node '" + c.child + "' has more than one table");
      continue;
    }
    const Distinction& child = *child_it->second;

    std::vector<std::string> listed = c.parents;
    std::sort(listed.begin(), listed.end());
    const bool repeated_parent =
        std::adjacent_find(listed.begin(), listed.end()) != listed.end();
    const auto expect_it = arc_parents.find(c.child);
    const std::vector<std::string> empty_expect;
    const std::vector<std::string>& expect =
        expect_it == arc_parents.end() ? empty_expect : expect_it->second;
    bool parents_ok = !repeated_parent && listed == expect;
    if (!parents_ok) {
      std::string msg = "table for '" + c.child +
                        "' conditions on {";
      for (std::size_t i = 0; i < c.parents.size(); ++i)
        msg += (i ? ", " : "") + c.parents[i];
      msg += "} but the arcs give {";
      for (std::size_t i = 0; i < expect.size(); ++i)
        msg += (i ? ", " : "") + expect[i];
      msg += "}";
      add(Severity::error, "cpt_parent_mismatch", c.child, std::move(msg));
    }

    std::vector<const Distinction*> parent_nodes;
    bool cards_known = true;
    for (const std::string& p : c.parents) {
      const auto it = byname.find(p);
      if (it == byname.end() || it->second->domain.empty()) {
        cards_known = false;
        break;
      }
      parent_nodes.push_back(it->second);
    }
    bool shape_ok = parents_ok && cards_known && !child.domain.empty();
    if (cards_known) {
      std::size_t expect_rows = 1;
      for (const Distinction* p : parent_nodes)
        expect_rows = sat_mul(expect_rows, p->domain.size());
      if (c.rows.size() != expect_rows) {
        add(Severity::error, "cpt_row_count", c.child,
            "table for '" + c.child + "' has " +
                std::to_string(c.rows.size()) + " rows, expected " +
                std::to_string(expect_rows));
        shape_ok = false;
      }
    }
    for (std::size_t r = 0; r < c.rows.size(); ++r) {
      const std::vector<double>& row = c.rows[r];
      if (row.size() != child.domain.size()) {
        add(Severity::error, "cpt_row_width", c.child,
            "table for '" + c.child + "' row " + std::to_string(r) + " has " +
                std::to_string(row.size()) + " entries, expected " +
                std::to_string(child.domain.size()));
        shape_ok = false;
        continue;
      }
      bool in_range = true;
      for (double p : row)
        if (!(p >= 0.0 && p <= 1.0)) {
          in_range = false;
          break;
        }
      if (!in_range) {
        add(Severity::error, "cpt_range", c.child,
            "table for '" + c.child + "' row " + std::to_string(r) +
                " has an entry outside [0, 1]");
        continue;
      }
      const double s = kern::sum(row);
      if (std::fabs(s - 1.0) > kProbTolerance)
        add(Severity::error, "cpt_row_sum", c.child,
            "table for '" + c.child + "' row " + std::to_string(r) +
                " sums to " + std::to_string(s));
    }
    if (shape_ok) lintable.push_back({&c, std::move(parent_nodes)});
  }

  for (const auto& [node_name, node] : byname) {
    (void)node;
    if (tabled.find(node_name) == tabled.end())
      add(Severity::error, "missing_cpt", node_name,
          "node '" + node_name + "' has no table");
  }

  bool acyclic = true;
  if (graph_ok) {
    // Kahn over the deduped arc set.
    std::map<std::string, std::size_t> indeg;
    for (const auto& [node_name, node] : byname) {
      (void)node;
      indeg[node_name] = 0;
    }
    for (const Arc& a : arcs) ++indeg[a.to];
    std::deque<std::string> ready;
    for (const auto& [node_name, deg] : indeg)
      if (deg == 0) ready.push_back(node_name);
    std::size_t popped = 0;
    while (!ready.empty()) {
      const std::string u = ready.front();
      ready.pop_front();
      ++popped;
      for (const Arc& a : arcs)
        if (a.from == u && --indeg[a.to] == 0) ready.push_back(a.to);
    }
    if (popped != indeg.size()) {
      std::string names;
      for (const auto& [node_name, deg] : indeg)
        if (deg > 0) names += (names.empty() ? "" : ", ") + node_name;
      add(Severity::error, "cycle", "",
          "arcs form a cycle involving: " + names);
      acyclic = false;
    }
  }

  // Minimality lint: an arc is vacuous when fixing the other parents and
  // varying this one never changes a row. Single-valued parents are skipped;
  // degenerate_domain already covers them.
  if (graph_ok && acyclic) {
    for (const LintItem& item : lintable) {
      const std::size_t k = item.parents.size();
      std::vector<std::size_t> card(k), stride(k);
      for (std::size_t i = 0; i < k; ++i) card[i] = item.parents[i]->domain.size();
      if (k > 0) {
        stride[k - 1] = 1;
        for (std::size_t i = k - 1; i-- > 0;)
          stride[i] = stride[i + 1] * card[i + 1];
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (card[j] < 2) continue;
        bool vacuous = true;
        for (std::size_t r = 0; r < item.cpt->rows.size() && vacuous; ++r) {
          const std::size_t dj = (r / stride[j]) % card[j];
          if (dj == 0) continue;
          const std::size_t base = r - dj * stride[j];
          if (kern::max_abs_diff(item.cpt->rows[r], item.cpt->rows[base]) >
              kProbTolerance)
            vacuous = false;
        }
        if (vacuous)
          add(Severity::warning, "vacuous_arc", item.cpt->child,
              "arc '" + item.parents[j]->name + "' -> '" + item.cpt->child +
                  "' never changes a table row");
      }
    }
  }

  return report;
}

std::vector<std::string> topological_order(const BeliefNetwork& bn) {
  const detail::CompiledNet view = detail::CompiledNet::build(bn);
  const std::size_t n = bn.nodes.size();
  std::vector<std::size_t> indeg(n);
  for (std::size_t i = 0; i < n; ++i) indeg[i] = view.parents[i].size();

  using Entry = std::pair<std::string, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.emplace(view.name(i), i);

  std::vector<std::string> order;
  order.reserve(n);
  while (!ready.empty()) {
    const auto [node_name, i] = ready.top();
    ready.pop();
    order.push_back(node_name);
    for (std::size_t c : view.children[i])
      if (--indeg[c] == 0) ready.emplace(view.name(c), c);
  }
  if (order.size() != n) {
    std::string names;
    for (std::size_t i = 0; i < n; ++i)
      if (indeg[i] > 0) names += (names.empty() ? "" : ", ") + view.name(i);
    throw ModelError("arcs form a cycle involving: " + names);
  }
  return order;
}

std::set<std::string> descendants(const BeliefNetwork& bn,
                                  const std::string& name) {
  const detail::CompiledNet view = detail::CompiledNet::build(bn);
  const std::size_t start = view.at(name);
  std::set<std::string> out;
  std::vector<char> seen(bn.nodes.size(), 0);
  std::deque<std::size_t> frontier{start};
  seen[start] = 1;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop_front();
    for (std::size_t c : view.children[u])
      if (!seen[c]) {
        seen[c] = 1;
        out.insert(view.name(c));
        frontier.push_back(c);
      }
  }
  return out;
}

bool d_separated(const BeliefNetwork& bn, const std::set<std::string>& x,
                 const std::set<std::string>& y,
                 const std::set<std::string>& z) {
  const detail::CompiledNet view = detail::CompiledNet::build(bn);
  auto resolve = [&](const std::set<std::string>& names) {
    std::set<std::size_t> out;
    for (const std::string& node : names) out.insert(view.at(node));
    return out;
  };
  const std::set<std::size_t> sx = resolve(x), sy = resolve(y),
                              sz = resolve(z);
  auto overlap = [](const std::set<std::size_t>& a,
                    const std::set<std::size_t>& b) {
    for (std::size_t v : a)
      if (b.count(v)) return true;
    return false;
  };
  if (overlap(sx, sy) || overlap(sx, sz) || overlap(sy, sz))
    throw ModelError("d-separation query sets must be pairwise disjoint");

  const std::size_t n = bn.nodes.size();

  // Ancestors of z, z included; these are where a collider can pass.
  std::vector<char> anc(n, 0);
  {
    std::deque<std::size_t> frontier(sz.begin(), sz.end());
    for (std::size_t v : sz) anc[v] = 1;
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop_front();
      for (std::size_t p : view.parents[u])
        if (!anc[p]) {
          anc[p] = 1;
          frontier.push_back(p);
        }
    }
  }

  // Trail walk over (node, direction) states; direction is the side the
  // trail enters from: 0 from a child (upward), 1 from a parent (downward).
  std::vector<std::array<char, 2>> visited(n, {0, 0});
  std::deque<std::pair<std::size_t, int>> frontier;
  for (std::size_t v : sx) frontier.emplace_back(v, 0);
  while (!frontier.empty()) {
    const auto [v, dir] = frontier.front();
    frontier.pop_front();
    if (visited[v][dir]) continue;
    visited[v][dir] = 1;
    const bool blocked = sz.count(v) != 0;
    if (!blocked && sy.count(v)) return false;
    if (dir == 0 && !blocked) {
      for (std::size_t p : view.parents[v]) frontier.emplace_back(p, 0);
      for (std::size_t c : view.children[v]) frontier.emplace_back(c, 1);
    } else if (dir == 1) {
      if (!blocked)
        for (std::size_t c : view.children[v]) frontier.emplace_back(c, 1);
      if (anc[v])
        for (std::size_t p : view.parents[v]) frontier.emplace_back(p, 0);
    }
  }
  return true;
}

}  // namespace probact
