#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "probact/fixtures.hpp"
#include "probact/inference.hpp"
#include "probact/io.hpp"
#include "probact/network.hpp"
#include "probact/projection.hpp"

namespace {

using namespace probact;

ParsedModel load(const std::string& path) {
  return parse_model(read_text_file(path));
}

const BeliefNetwork& as_network(const ParsedModel& m, const std::string& path) {
  if (const auto* p = std::get_if<BeliefNetwork>(&m)) return *p;
  throw ModelError("'" + path + "' does not hold a network document");
}

const ActionModel& as_action(const ParsedModel& m, const std::string& path) {
  if (const auto* p = std::get_if<ActionModel>(&m)) return *p;
  throw ModelError("'" + path + "' does not hold an action document");
}

const EnvironmentModel& as_environment(const ParsedModel& m,
                                       const std::string& path) {
  if (const auto* p = std::get_if<EnvironmentModel>(&m)) return *p;
  throw ModelError("'" + path + "' does not hold an environment document");
}

// Nodes and arcs of any model kind, for structure-only queries.
BeliefNetwork structure_of(const ParsedModel& m) {
  if (const auto* bn = std::get_if<BeliefNetwork>(&m))
    return BeliefNetwork{bn->nodes, bn->arcs, {}, ""};
  const ConditionalBeliefNet* cbn = nullptr;
  if (const auto* c = std::get_if<ConditionalBeliefNet>(&m)) cbn = c;
  if (const auto* a = std::get_if<ActionModel>(&m)) cbn = &a->cbn;
  if (const auto* v = std::get_if<EnvironmentModel>(&m)) cbn = &v->cbn;
  BeliefNetwork bn;
  bn.nodes = cbn->free_nodes;
  bn.nodes.insert(bn.nodes.end(), cbn->bound_nodes.begin(),
                  cbn->bound_nodes.end());
  bn.arcs = cbn->arcs;
  return bn;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

Assignment parse_given(const std::vector<std::string>& pairs) {
  Assignment out;
  for (const std::string& s : pairs) {
    const std::size_t pos = s.find('=');
    if (pos == std::string::npos || pos == 0)
      throw ParseError("evidence must be name=value, got '" + s + "'");
    const std::string name = s.substr(0, pos);
    if (out.count(name))
      throw ParseError("evidence names '" + name + "' twice");
    out[name] = s.substr(pos + 1);
  }
  return out;
}

std::set<std::string> split_list(const std::string& s) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::size_t end = comma == std::string::npos ? s.size() : comma;
    if (end > start) out.insert(s.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string json_quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// ---- subcommand bodies ----------------------------------------------------

int run_validate(const std::string& path) {
  const ParsedModel m = load(path);
  const ValidationReport report = std::visit(
      [](const auto& v) -> ValidationReport {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BeliefNetwork>)
          return validate_network(v);
        else if constexpr (std::is_same_v<T, ConditionalBeliefNet>)
          return validate_cbn(v);
        else if constexpr (std::is_same_v<T, ActionModel>)
          return validate_action(v);
        else
          return validate_environment(v);
      },
      m);
  const std::string text = report.to_string();
  if (!text.empty()) std::cout << text;
  std::cout << "valid\n";
  return 0;
}

struct ProjectArgs {
  std::string state_path;
  std::vector<std::string> action_paths;
  std::string env_path;
  bool original = false;
  bool allow_incompatible = false;
  bool materialize_persisted = false;
  std::string extract_path;
  std::string out_path;
};

int run_project(const ProjectArgs& args) {
  const ParsedModel sm = load(args.state_path);
  const BeliefNetwork& state = as_network(sm, args.state_path);
  std::vector<ActionModel> actions;
  std::vector<ParsedModel> holders;
  holders.reserve(args.action_paths.size());
  for (const std::string& p : args.action_paths) {
    holders.push_back(load(p));
    actions.push_back(as_action(holders.back(), p));
  }

  if (actions.empty()) {
    const std::string doc = serialize_model(state);
    emit(doc, args.out_path);
    if (!args.extract_path.empty()) write_text_file(args.extract_path, doc);
    return 0;
  }

  ProjectionOptions opts;
  opts.allow_incompatible = args.allow_incompatible;
  opts.materialize_persisted = args.materialize_persisted;

  ProjectionResult pr;
  if (args.original) {
    if (actions.size() != 1)
      throw ParseError("--original projects exactly one action");
    pr = project_original(state, actions[0], opts);
  } else {
    if (args.env_path.empty())
      throw ParseError("the default projection mode needs --env");
    const ParsedModel em = load(args.env_path);
    pr = project_sequence(state, actions, as_environment(em, args.env_path),
                          opts);
  }
  emit(serialize_model(pr.combined), args.out_path);
  if (!args.extract_path.empty())
    write_text_file(args.extract_path, serialize_model(extract_successor(pr)));
  return 0;
}

struct QueryArgs {
  std::string model_path;
  std::vector<std::string> targets;
  std::vector<std::string> given;
  bool as_json = false;
};

int run_query(const QueryArgs& args) {
  const ParsedModel m = load(args.model_path);
  const BeliefNetwork& bn = as_network(m, args.model_path);
  const Assignment evidence = parse_given(args.given);
  const Dist d = marginal(bn, args.targets, evidence);

  if (args.as_json) {
    std::string out = "{\n  \"given\": {";
    bool first = true;
    for (const auto& [name, value] : evidence) {
      if (!first) out += ", ";
      first = false;
      out += json_quoted(name) + ": " + json_quoted(value);
    }
    out += "},\n  \"probabilities\": [";
    for (std::size_t i = 0; i < d.probabilities.size(); ++i)
      out += (i ? ", " : "") + num17(d.probabilities[i]);
    out += "],\n  \"targets\": [\n";
    for (std::size_t i = 0; i < d.scope.size(); ++i) {
      out += "    {\"domain\": [";
      for (std::size_t k = 0; k < d.scope[i].domain.size(); ++k)
        out += (k ? ", " : "") + json_quoted(d.scope[i].domain[k]);
      out += "], \"name\": " + json_quoted(d.scope[i].name) + "}";
      out += i + 1 < d.scope.size() ? ",\n" : "\n";
    }
    out += "  ]\n}\n";
    std::cout << out;
    return 0;
  }

  const std::size_t cols = d.scope.size();
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> head;
  for (const Distinction& t : d.scope) head.push_back(t.name);
  head.push_back("p");
  table.push_back(std::move(head));
  for (std::size_t idx = 0; idx < d.probabilities.size(); ++idx) {
    std::vector<std::string> row(cols + 1);
    std::size_t rem = idx;
    for (std::size_t k = cols; k-- > 0;) {
      const std::vector<std::string>& dom = d.scope[k].domain;
      row[k] = dom[rem % dom.size()];
      rem /= dom.size();
    }
    row[cols] = num17(d.probabilities[idx]);
    table.push_back(std::move(row));
  }
  std::vector<std::size_t> width(cols + 1, 0);
  for (const auto& row : table)
    for (std::size_t k = 0; k <= cols; ++k)
      width[k] = std::max(width[k], row[k].size());
  for (const auto& row : table) {
    std::string line;
    for (std::size_t k = 0; k <= cols; ++k) {
      if (k) line += "  ";
      line += row[k];
      if (k < cols) line.append(width[k] - row[k].size(), ' ');
    }
    std::cout << line << "\n";
  }
  return 0;
}

int run_check(const std::string& state_path, const std::string& env_path,
              double tol) {
  const ParsedModel sm = load(state_path);
  const ParsedModel em = load(env_path);
  const ConsistencyReport report = check_consistency(
      as_network(sm, state_path), as_environment(em, env_path), tol);

  std::vector<std::vector<std::string>> table;
  table.push_back({"node", "worst", "rows", "unverifiable"});
  for (const ConsistencyNode& n : report.nodes)
    table.push_back({n.node, num17(n.worst), std::to_string(n.rows_checked),
                     std::to_string(n.rows_unverifiable)});
  std::vector<std::size_t> width(4, 0);
  for (const auto& row : table)
    for (std::size_t k = 0; k < 4; ++k)
      width[k] = std::max(width[k], row[k].size());
  for (const auto& row : table) {
    std::string line;
    for (std::size_t k = 0; k < 4; ++k) {
      if (k) line += "  ";
      line += row[k];
      if (k < 3) line.append(width[k] - row[k].size(), ' ');
    }
    std::cout << line << "\n";
  }
  std::cout << (report.consistent ? "consistent" : "inconsistent")
            << " (tol " << num17(report.tol) << ", worst "
            << num17(report.worst) << ")\n";
  return report.consistent ? 0 : 1;
}

int run_dsep(const std::string& model_path, const std::string& x,
             const std::string& y, const std::string& z) {
  const ParsedModel m = load(model_path);
  const BeliefNetwork bn = structure_of(m);
  const bool separated =
      d_separated(bn, split_list(x), split_list(y), split_list(z));
  std::cout << (separated ? "d-separated" : "not d-separated") << "\n";
  return 0;
}

int run_sample(const std::string& model_path, std::size_t n,
               std::uint64_t seed, const std::string& out_path) {
  const ParsedModel m = load(model_path);
  const BeliefNetwork& bn = as_network(m, model_path);
  const std::vector<Assignment> samples = forward_sample(bn, n, seed);

  std::vector<std::string> names;
  for (const Distinction& d : bn.nodes) names.push_back(d.name);
  std::sort(names.begin(), names.end());
  std::string text;
  for (std::size_t k = 0; k < names.size(); ++k)
    text += (k ? "," : "") + names[k];
  text += "\n";
  for (const Assignment& s : samples) {
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (k) text += ",";
      text += s.at(names[k]);
    }
    text += "\n";
  }
  emit(text, out_path);
  return 0;
}

int run_dot(const std::string& model_path, bool no_slice_clusters,
            const std::string& out_path) {
  const ParsedModel m = load(model_path);
  DotOptions opts;
  opts.cluster_slices = !no_slice_clusters;
  emit(export_dot(m, opts), out_path);
  return 0;
}

int run_fixture(const std::string& name, const std::string& out_path,
                const std::string& dir) {
  if (!dir.empty()) {
    if (!name.empty())
      throw ParseError("--dir writes every fixture; leave the name out");
    for (const std::string& n : fixture_names())
      write_text_file(dir + "/" + fixture_filename(n),
                      serialize_model(load_fixture(n)));
    return 0;
  }
  if (name.empty()) {
    for (const std::string& n : fixture_names()) std::cout << n << "\n";
    return 0;
  }
  emit(serialize_model(load_fixture(name)), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"belief-network action models: validate, project, query"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* cmd_validate =
      app.add_subcommand("validate", "parse a model file and report problems");
  cmd_validate->add_option("path", validate_path, "model file")->required();

  ProjectArgs pa;
  CLI::App* cmd_project = app.add_subcommand(
      "project", "unroll actions against a state into a combined network");
  cmd_project->add_option("state", pa.state_path, "state network file")
      ->required();
  cmd_project->add_option("actions", pa.action_paths, "action model files");
  cmd_project->add_option("--env", pa.env_path,
                          "environment model (default mode only)");
  cmd_project->add_flag("--original", pa.original,
                        "state-only variant: consequences come from the "
                        "state's own tables");
  bool modified_flag = false;
  cmd_project->add_flag("--modified", modified_flag,
                        "environment-model variant (the default)");
  cmd_project->add_flag("--allow-incompatible", pa.allow_incompatible,
                        "let action tables override environment tables");
  cmd_project->add_flag("--materialize-persisted", pa.materialize_persisted,
                        "copy untouched distinctions into each new slice");
  cmd_project->add_option("--extract", pa.extract_path,
                          "also write the successor state to this file");
  cmd_project->add_option("--out", pa.out_path,
                          "combined network file (default: standard output)");

  QueryArgs qa;
  CLI::App* cmd_query =
      app.add_subcommand("query", "conditional distribution over targets");
  cmd_query->add_option("model", qa.model_path, "network file")->required();
  cmd_query->add_option("--target", qa.targets, "target nodes")
      ->required()
      ->delimiter(',');
  cmd_query->add_option("--given", qa.given, "evidence as name=value");
  cmd_query->add_flag("--json", qa.as_json, "print a JSON document");

  std::string check_state, check_env;
  double check_tol = kConsistencyTolerance;
  CLI::App* cmd_check = app.add_subcommand(
      "check", "verify a state is consistent with an environment model");
  cmd_check->add_option("state", check_state, "state network file")
      ->required();
  cmd_check->add_option("env", check_env, "environment model file")
      ->required();
  cmd_check->add_option("--tol", check_tol, "largest accepted deviation");

  std::string dsep_model, dsep_x, dsep_y, dsep_z;
  CLI::App* cmd_dsep =
      app.add_subcommand("dsep", "test d-separation of two node sets");
  cmd_dsep->add_option("model", dsep_model, "model file")->required();
  cmd_dsep->add_option("x", dsep_x, "first node set, comma separated")
      ->required();
  cmd_dsep->add_option("y", dsep_y, "second node set, comma separated")
      ->required();
  cmd_dsep->add_option("z", dsep_z, "conditioning set, comma separated");

  std::string sample_model, sample_out;
  std::size_t sample_n = 0;
  std::uint64_t sample_seed = 0;
  CLI::App* cmd_sample =
      app.add_subcommand("sample", "draw forward samples as CSV");
  cmd_sample->add_option("model", sample_model, "network file")->required();
  cmd_sample->add_option("-n,--count", sample_n, "number of samples")
      ->required();
  cmd_sample->add_option("--seed", sample_seed, "generator seed");
  cmd_sample->add_option("--out", sample_out,
                         "CSV file (default: standard output)");

  std::string dot_model, dot_out;
  bool dot_no_clusters = false;
  CLI::App* cmd_dot = app.add_subcommand("dot", "export Graphviz DOT");
  cmd_dot->add_option("model", dot_model, "model file")->required();
  cmd_dot->add_flag("--no-slice-clusters", dot_no_clusters,
                    "skip per-slice clustering of unrolled networks");
  cmd_dot->add_option("--out", dot_out, "DOT file (default: standard output)");

  std::string fixture_name, fixture_out, fixture_dir;
  CLI::App* cmd_fixture = app.add_subcommand(
      "fixture", "print a bundled example model (no name: list them)");
  cmd_fixture->add_option("name", fixture_name, "fixture name");
  cmd_fixture->add_option("--out", fixture_out,
                          "write to this file instead of standard output");
  cmd_fixture->add_option("--dir", fixture_dir,
                          "write every fixture into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(cmd_validate)) return run_validate(validate_path);
    if (app.got_subcommand(cmd_project)) {
      if (pa.original && modified_flag)
        throw probact::ParseError("--original and --modified conflict");
      return run_project(pa);
    }
    if (app.got_subcommand(cmd_query)) return run_query(qa);
    if (app.got_subcommand(cmd_check))
      return run_check(check_state, check_env, check_tol);
    if (app.got_subcommand(cmd_dsep))
      return run_dsep(dsep_model, dsep_x, dsep_y, dsep_z);
    if (app.got_subcommand(cmd_sample))
      return run_sample(sample_model, sample_n, sample_seed, sample_out);
    if (app.got_subcommand(cmd_dot))
      return run_dot(dot_model, dot_no_clusters, dot_out);
    if (app.got_subcommand(cmd_fixture))
      return run_fixture(fixture_name, fixture_out, fixture_dir);
  } catch (const probact::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const probact::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const probact::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
