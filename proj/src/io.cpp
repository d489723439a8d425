#include "probact/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace probact {

namespace {

using nlohmann::json;

// ---- canonical emission ----------------------------------------------

std::string render_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string jstr(const std::string& s) {
  std::string out = "\"";
  for (char raw : s) {
    const unsigned char c = static_cast<unsigned char>(raw);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += raw;
        }
    }
  }
  out += '"';
  return out;
}

std::string pad(int indent) { return std::string(2 * indent, ' '); }

std::string inline_strings(const std::vector<std::string>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += (i ? ", " : "") + jstr(xs[i]);
  return out + "]";
}

std::string inline_numbers(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += (i ? ", " : "") + render_number(xs[i]);
  return out + "]";
}

std::string arcs_value(std::vector<Arc> arcs, int indent) {
  std::sort(arcs.begin(), arcs.end());
  if (arcs.empty()) return "[]";
  std::string out = "[\n";
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    out += pad(indent + 1) + "[" + jstr(arcs[i].from) + ", " +
           jstr(arcs[i].to) + "]";
    out += i + 1 < arcs.size() ? ",\n" : "\n";
  }
  return out + pad(indent) + "]";
}

std::string distinctions_value(std::vector<Distinction> nodes, int indent) {
  std::sort(nodes.begin(), nodes.end(),
            [](const Distinction& a, const Distinction& b) {
              return a.name < b.name;
            });
  if (nodes.empty()) return "[]";
  std::string out = "[\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out += pad(indent + 1) + "{\n";
    out += pad(indent + 2) + "\"domain\": " + inline_strings(nodes[i].domain) +
           ",\n";
    out += pad(indent + 2) + "\"name\": " + jstr(nodes[i].name) + "\n";
    out += pad(indent + 1) + "}";
    out += i + 1 < nodes.size() ? ",\n" : "\n";
  }
  return out + pad(indent) + "]";
}

std::string cpts_value(std::vector<Cpt> cpts, int indent) {
  std::sort(cpts.begin(), cpts.end(),
            [](const Cpt& a, const Cpt& b) { return a.child < b.child; });
  if (cpts.empty()) return "{}";
  std::string out = "{\n";
  for (std::size_t i = 0; i < cpts.size(); ++i) {
    const Cpt& c = cpts[i];
    out += pad(indent + 1) + jstr(c.child) + ": {\n";
    out += pad(indent + 2) + "\"parents\": " + inline_strings(c.parents) +
           ",\n";
    if (c.rows.empty()) {
      out += pad(indent + 2) + "\"rows\": []\n";
    } else {
      out += pad(indent + 2) + "\"rows\": [\n";
      for (std::size_t r = 0; r < c.rows.size(); ++r) {
        out += pad(indent + 3) + inline_numbers(c.rows[r]);
        out += r + 1 < c.rows.size() ? ",\n" : "\n";
      }
      out += pad(indent + 2) + "]\n";
    }
    out += pad(indent + 1) + "}";
    out += i + 1 < cpts.size() ? ",\n" : "\n";
  }
  return out + pad(indent) + "}";
}

struct DocParts {
  std::string kind;
  std::vector<Distinction> nodes;
  std::vector<Arc> arcs;
  std::vector<Cpt> cpts;
  std::optional<std::vector<std::string>> free_list;
  std::optional<std::vector<std::string>> bound_list;
  std::optional<std::string> action_value;  // pre-rendered object
  bool include_action_node = false;
  std::string notes;
};

std::string render_doc(DocParts p) {
  std::string out = "{\n";
  bool first = true;
  auto entry = [&](const char* key, const std::string& value) {
    if (!first) out += ",\n";
    first = false;
    out += pad(1) + jstr(key) + ": " + value;
  };
  if (p.action_value) entry("action", *p.action_value);
  entry("arcs", arcs_value(std::move(p.arcs), 1));
  if (p.bound_list) {
    std::sort(p.bound_list->begin(), p.bound_list->end());
    entry("bound", inline_strings(*p.bound_list));
  }
  entry("cpts", cpts_value(std::move(p.cpts), 1));
  entry("distinctions", distinctions_value(std::move(p.nodes), 1));
  if (p.free_list) {
    std::sort(p.free_list->begin(), p.free_list->end());
    entry("free", inline_strings(*p.free_list));
  }
  if (p.include_action_node) entry("include_action_node", "true");
  entry("kind", jstr(p.kind));
  if (!p.notes.empty()) entry("notes", jstr(p.notes));
  return out + "\n}\n";
}

std::vector<std::string> names_of(const std::vector<Distinction>& nodes) {
  std::vector<std::string> out;
  out.reserve(nodes.size());
  for (const Distinction& d : nodes) out.push_back(d.name);
  return out;
}

DocParts cbn_parts(const std::string& kind, const ConditionalBeliefNet& cbn) {
  DocParts p;
  p.kind = kind;
  p.nodes = cbn.free_nodes;
  p.nodes.insert(p.nodes.end(), cbn.bound_nodes.begin(),
                 cbn.bound_nodes.end());
  p.arcs = cbn.arcs;
  p.cpts = cbn.cpts;
  p.free_list = names_of(cbn.free_nodes);
  p.bound_list = names_of(cbn.bound_nodes);
  p.notes = cbn.notes;
  return p;
}

// ---- parsing ----------------------------------------------------------

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail("unknown field '" + it.key() + "' in " + where);
}

const json& need(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) fail(where + " is missing field '" + key + "'");
  return *it;
}

std::string str_of(const json& j, const std::string& what) {
  if (!j.is_string()) fail(what + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const std::string& what) {
  if (!j.is_array()) fail(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const json& e : j) out.push_back(str_of(e, "entry of " + what));
  return out;
}

std::vector<Distinction> parse_distinctions(const json& j) {
  if (!j.is_array()) fail("'distinctions' must be an array");
  std::vector<Distinction> out;
  for (const json& e : j) {
    if (!e.is_object()) fail("each distinction must be an object");
    check_keys(e, {"domain", "name"}, "a distinction");
    Distinction d;
    d.name = str_of(need(e, "name", "a distinction"), "'name'");
    d.domain = string_list(need(e, "domain", "a distinction"), "'domain'");
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Arc> parse_arcs(const json& j) {
  if (!j.is_array()) fail("'arcs' must be an array");
  std::vector<Arc> out;
  for (const json& e : j) {
    if (!e.is_array() || e.size() != 2)
      fail("each arc must be a [from, to] pair");
    out.push_back(Arc{str_of(e[0], "arc endpoint"),
                      str_of(e[1], "arc endpoint")});
  }
  return out;
}

std::vector<Cpt> parse_cpts(const json& j) {
  if (!j.is_object()) fail("'cpts' must be an object keyed by node");
  std::vector<Cpt> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& body = it.value();
    if (!body.is_object()) fail("table for '" + it.key() + "' must be an object");
    check_keys(body, {"parents", "rows"}, "the table for '" + it.key() + "'");
    Cpt c;
    c.child = it.key();
    c.parents = string_list(need(body, "parents", "the table for '" + it.key() + "'"),
                            "'parents'");
    const json& rows = need(body, "rows", "the table for '" + it.key() + "'");
    if (!rows.is_array()) fail("'rows' must be an array of rows");
    for (const json& row : rows) {
      if (!row.is_array()) fail("each row must be an array of numbers");
      std::vector<double> values;
      for (const json& v : row) {
        if (!v.is_number()) fail("table entries must be numbers");
        values.push_back(v.get<double>());
      }
      c.rows.push_back(std::move(values));
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string parse_notes(const json& j) {
  const auto it = j.find("notes");
  if (it == j.end()) return {};
  return str_of(*it, "'notes'");
}

ConditionalBeliefNet build_cbn(const json& j) {
  ConditionalBeliefNet cbn;
  const std::vector<Distinction> nodes =
      parse_distinctions(need(j, "distinctions", "the document"));
  std::map<std::string, const Distinction*> byname;
  for (const Distinction& d : nodes)
    if (!byname.emplace(d.name, &d).second)
      fail("distinction '" + d.name + "' is declared twice");

  std::set<std::string> claimed;
  auto pick = [&](const json& list, const std::string& what,
                  std::vector<Distinction>& dst) {
    for (const std::string& name : string_list(list, what)) {
      const auto it = byname.find(name);
      if (it == byname.end())
        fail(what + " names unknown distinction '" + name + "'");
      if (!claimed.insert(name).second)
        fail("distinction '" + name + "' is listed twice in free/bound");
      dst.push_back(*it->second);
    }
  };
  pick(need(j, "free", "the document"), "'free'", cbn.free_nodes);
  pick(need(j, "bound", "the document"), "'bound'", cbn.bound_nodes);
  if (claimed.size() != nodes.size())
    for (const Distinction& d : nodes)
      if (!claimed.count(d.name))
        fail("distinction '" + d.name + "' is neither free nor bound");

  cbn.arcs = parse_arcs(need(j, "arcs", "the document"));
  cbn.cpts = parse_cpts(need(j, "cpts", "the document"));
  cbn.notes = parse_notes(j);
  return cbn;
}

void require_valid(const ValidationReport& report, const std::string& what) {
  if (!report.valid())
    throw ModelError("invalid " + what + ":\n" + report.to_string());
}

}  // namespace

ParsedModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what(),
                     line_of(text, e.byte));
  }
  if (!j.is_object()) fail("document must be a JSON object");
  const std::string kind =
      str_of(need(j, "kind", "the document"), "'kind'");

  if (kind == "network") {
    check_keys(j, {"arcs", "cpts", "distinctions", "kind", "notes"},
               "a network document");
    BeliefNetwork bn;
    bn.nodes = parse_distinctions(need(j, "distinctions", "the document"));
    bn.arcs = parse_arcs(need(j, "arcs", "the document"));
    bn.cpts = parse_cpts(need(j, "cpts", "the document"));
    bn.notes = parse_notes(j);
    require_valid(validate_network(bn), "network");
    return bn;
  }
  if (kind == "cbn") {
    check_keys(j, {"arcs", "bound", "cpts", "distinctions", "free", "kind",
                   "notes"},
               "a conditional network document");
    ConditionalBeliefNet cbn = build_cbn(j);
    require_valid(validate_cbn(cbn), "conditional network");
    return cbn;
  }
  if (kind == "environment") {
    check_keys(j, {"arcs", "bound", "cpts", "distinctions", "free", "kind",
                   "notes"},
               "an environment document");
    EnvironmentModel v{build_cbn(j)};
    require_valid(validate_environment(v), "environment");
    return v;
  }
  if (kind == "action") {
    check_keys(j, {"action", "arcs", "bound", "cpts", "distinctions", "free",
                   "include_action_node", "kind", "notes"},
               "an action document");
    ActionModel a;
    a.cbn = build_cbn(j);
    const json& aj = need(j, "action", "the document");
    if (!aj.is_object()) fail("'action' must be an object");
    check_keys(aj, {"eff", "name", "qual"}, "'action'");
    a.name = str_of(need(aj, "name", "'action'"), "'name'");
    if (const auto it = j.find("include_action_node"); it != j.end()) {
      if (!it->is_boolean()) fail("'include_action_node' must be a boolean");
      a.include_action_node = it->get<bool>();
    }

    const std::vector<std::string> qual =
        string_list(need(aj, "qual", "'action'"), "'qual'");
    const std::vector<std::string> eff =
        string_list(need(aj, "eff", "'action'"), "'eff'");
    std::set<std::string> declared_qual(qual.begin(), qual.end());
    std::set<std::string> free_names;
    for (const Distinction& d : a.cbn.free_nodes) free_names.insert(d.name);
    if (declared_qual != free_names)
      fail("'qual' disagrees with the free node list");
    bool bases_ok = true;
    std::set<std::string> bases;
    for (const Distinction& d : a.cbn.bound_nodes) {
      if (!is_effect_node_name(d.name)) {
        bases_ok = false;  // the validator reports the bad name
        break;
      }
      bases.insert(effect_base(d.name));
    }
    if (bases_ok && std::set<std::string>(eff.begin(), eff.end()) != bases)
      fail("'eff' disagrees with the bound node list");
    require_valid(validate_action(a), "action");
    return a;
  }
  fail("unknown kind '" + kind + "'");
}

std::string serialize_model(const BeliefNetwork& bn) {
  DocParts p;
  p.kind = "network";
  p.nodes = bn.nodes;
  p.arcs = bn.arcs;
  p.cpts = bn.cpts;
  p.notes = bn.notes;
  return render_doc(std::move(p));
}

std::string serialize_model(const ConditionalBeliefNet& cbn) {
  return render_doc(cbn_parts("cbn", cbn));
}

std::string serialize_model(const EnvironmentModel& v) {
  return render_doc(cbn_parts("environment", v.cbn));
}

std::string serialize_model(const ActionModel& a) {
  DocParts p = cbn_parts("action", a.cbn);
  p.include_action_node = a.include_action_node;
  std::vector<std::string> qual = qualification(a);
  std::vector<std::string> eff = effects(a);
  std::sort(qual.begin(), qual.end());
  std::sort(eff.begin(), eff.end());
  std::string av = "{\n";
  av += pad(2) + "\"eff\": " + inline_strings(eff) + ",\n";
  av += pad(2) + "\"name\": " + jstr(a.name) + ",\n";
  av += pad(2) + "\"qual\": " + inline_strings(qual) + "\n";
  av += pad(1) + "}";
  p.action_value = std::move(av);
  return render_doc(std::move(p));
}

std::string serialize_model(const ParsedModel& m) {
  return std::visit([](const auto& v) { return serialize_model(v); }, m);
}

// ---- DOT export ---------------------------------------------------------

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string node_line(const Distinction& d, int indent) {
  std::string out = pad(indent) + dot_quote(d.name);
  if (d.domain.size() == 1) out += " [shape=box]";
  return out + ";\n";
}

std::optional<TimedName> maybe_timed(const std::string& name) {
  try {
    return TimedName::parse(name);
  } catch (const ModelError&) {
    return std::nullopt;
  }
}

std::string dot_graph(const std::vector<Distinction>& top,
                      const std::vector<std::pair<std::string,
                                                  std::vector<Distinction>>>&
                          clusters,
                      std::vector<Arc> arcs) {
  std::string out = "digraph model {\n";
  out += pad(1) + "node [shape=ellipse];\n";
  for (const Distinction& d : top) out += node_line(d, 1);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    out += pad(1) + "subgraph cluster_" + std::to_string(i) + " {\n";
    out += pad(2) + "label=" + dot_quote(clusters[i].first) + ";\n";
    out += pad(2) + "style=rounded;\n";
    for (const Distinction& d : clusters[i].second) out += node_line(d, 2);
    out += pad(1) + "}\n";
  }
  std::sort(arcs.begin(), arcs.end());
  for (const Arc& a : arcs)
    out += pad(1) + dot_quote(a.from) + " -> " + dot_quote(a.to) + ";\n";
  return out + "}\n";
}

std::string dot_for_cbn(const ConditionalBeliefNet& cbn,
                        const std::string& cluster_label) {
  std::vector<Distinction> top = cbn.free_nodes;
  std::vector<Distinction> bound = cbn.bound_nodes;
  auto by_name = [](const Distinction& a, const Distinction& b) {
    return a.name < b.name;
  };
  std::sort(top.begin(), top.end(), by_name);
  std::sort(bound.begin(), bound.end(), by_name);
  return dot_graph(top, {{cluster_label, std::move(bound)}}, cbn.arcs);
}

}  // namespace

std::string export_dot(const BeliefNetwork& bn, const DotOptions& opts) {
  std::vector<Distinction> nodes = bn.nodes;
  std::sort(nodes.begin(), nodes.end(),
            [](const Distinction& a, const Distinction& b) {
              return a.name < b.name;
            });
  bool timed = opts.cluster_slices && !nodes.empty();
  std::map<int, std::vector<Distinction>> slices;
  if (timed)
    for (const Distinction& d : nodes) {
      const std::optional<TimedName> t = maybe_timed(d.name);
      if (!t) {
        timed = false;
        break;
      }
      slices[t->slice].push_back(d);
    }
  if (!timed) return dot_graph(nodes, {}, bn.arcs);

  std::vector<Distinction> top = std::move(slices[0]);
  std::vector<std::pair<std::string, std::vector<Distinction>>> clusters;
  for (auto& [slice, members] : slices)
    if (slice != 0)
      clusters.emplace_back("slice " + std::to_string(slice),
                            std::move(members));
  return dot_graph(top, clusters, bn.arcs);
}

std::string export_dot(const ConditionalBeliefNet& cbn, const DotOptions&) {
  return dot_for_cbn(cbn, "bound");
}

std::string export_dot(const ActionModel& a, const DotOptions&) {
  return dot_for_cbn(a.cbn, a.name);
}

std::string export_dot(const EnvironmentModel& v, const DotOptions&) {
  return dot_for_cbn(v.cbn, "bound");
}

std::string export_dot(const ParsedModel& m, const DotOptions& opts) {
  return std::visit([&](const auto& v) { return export_dot(v, opts); }, m);
}

// ---- files ---------------------------------------------------------------

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return std::move(buffer).str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("cannot write '" + path + "'");
}

}  // namespace probact
