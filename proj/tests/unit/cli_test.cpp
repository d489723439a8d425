#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "probact/fixtures.hpp"
#include "probact/inference.hpp"
#include "probact/io.hpp"
#include "testutil.hpp"

using namespace probact;
using testutil::CliResult;
using testutil::run_cli;
using testutil::temp_path;

namespace {

// One shared directory of fixture files, written through the tool itself.
const std::string& fixture_dir() {
  static const std::string dir = [] {
    const std::string d = temp_path("cli_fixtures");
    std::filesystem::create_directories(d);
    const CliResult r = run_cli({"fixture", "--dir", d});
    REQUIRE(r.exit_code == 0);
    return d;
  }();
  return dir;
}

std::string fixture_path(const std::string& name) {
  return fixture_dir() + "/" + fixture_filename(name);
}

std::string write_doc(const std::string& name, const ParsedModel& m) {
  const std::string path = temp_path(name);
  write_text_file(path, serialize_model(m));
  return path;
}

// Probability column of an aligned query table, keyed by the value column.
std::map<std::string, double> parse_query_rows(const std::string& out) {
  std::map<std::string, double> rows;
  std::istringstream lines(out);
  std::string line;
  bool header = true;
  while (std::getline(lines, line)) {
    if (header) {
      header = false;
      continue;
    }
    std::istringstream fields(line);
    std::string value, p;
    fields >> value >> p;
    rows[value] = std::stod(p);
  }
  return rows;
}

ActionModel alarm_rewriter() {
  ActionModel a;
  a.name = "mute";
  a.cbn.free_nodes = {{"sound", {"off", "on"}}};
  a.cbn.bound_nodes = {{"alarm@next", {"off", "on"}}};
  a.cbn.arcs = {{"sound", "alarm@next"}};
  a.cbn.cpts = {{"alarm@next", {"sound"}, {{0.99, 0.01}, {0.95, 0.05}}}};
  return a;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("validate reports on each model kind") {
    for (const std::string& name : fixture_names()) {
      CAPTURE(name);
      const CliResult r = run_cli({"validate", fixture_path(name)});
      CHECK(r.exit_code == 0);
      CHECK(r.out.find("valid") != std::string::npos);
    }
  }

  TEST_CASE("validate rejects broken documents with distinct codes") {
    BeliefNetwork cyclic;
    cyclic.nodes = {{"a", {"f", "t"}}, {"b", {"f", "t"}}};
    cyclic.arcs = {{"a", "b"}, {"b", "a"}};
    cyclic.cpts = {{"a", {"b"}, {{0.5, 0.5}, {0.5, 0.5}}},
                   {"b", {"a"}, {{0.5, 0.5}, {0.5, 0.5}}}};
    const std::string cyclic_path = temp_path("cyclic.bnw");
    write_text_file(cyclic_path, serialize_model(cyclic));

    const CliResult bad = run_cli({"validate", cyclic_path});
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("cycle") != std::string::npos);

    const CliResult missing = run_cli({"validate", temp_path("absent.bnw")});
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("cannot read") != std::string::npos);

    const std::string mangled_path = temp_path("mangled.bnw");
    write_text_file(mangled_path, "{ \"kind\": \"network\", ");
    const CliResult mangled = run_cli({"validate", mangled_path});
    CHECK(mangled.exit_code == 2);
  }

  TEST_CASE("project with no actions echoes the state") {
    const std::string state = fixture_path("figure1_state");
    const CliResult r = run_cli({"project", state});
    CHECK(r.exit_code == 0);
    CHECK(r.out == read_text_file(state));
  }

  TEST_CASE("project unrolls the pickup and extracts a successor") {
    const std::string out = temp_path("combined.bnw");
    const std::string succ = temp_path("successor.bnw");
    const CliResult r =
        run_cli({"project", fixture_path("figure1_state"),
                 fixture_path("figure2_pickup"), "--env",
                 fixture_path("figure3_env"), "--out", out, "--extract", succ});
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());

    const auto combined =
        std::get<BeliefNetwork>(parse_model(read_text_file(out)));
    CHECK(find_node(combined, "alarm@1") != nullptr);
    CHECK(find_node(combined, "location@1") != nullptr);
    CHECK(find_node(combined, "light@0") != nullptr);

    const auto successor =
        std::get<BeliefNetwork>(parse_model(read_text_file(succ)));
    CHECK(successor.nodes.size() == 8);
    for (const Distinction& d : successor.nodes)
      CHECK(d.name.find('@') == std::string::npos);
  }

  TEST_CASE("project gates on compatibility unless overridden") {
    const std::string mute = write_doc("mute.act", alarm_rewriter());
    const std::vector<std::string> base = {
        "project", fixture_path("figure1_state"), mute, "--env",
        fixture_path("figure3_env")};

    const CliResult refused = run_cli(base);
    CHECK(refused.exit_code == 1);
    CHECK(refused.err.find("rewrites") != std::string::npos);

    std::vector<std::string> forced = base;
    forced.push_back("--allow-incompatible");
    const CliResult allowed = run_cli(forced);
    CHECK(allowed.exit_code == 0);
    CHECK(allowed.out.find("alarm@1") != std::string::npos);
  }

  TEST_CASE("project flag misuse is a usage error") {
    const std::string state = fixture_path("figure1_state");
    const std::string pickup = fixture_path("figure2_pickup");

    const CliResult two = run_cli(
        {"project", state, pickup, pickup, "--original"});
    CHECK(two.exit_code == 2);

    const CliResult both = run_cli({"project", state, pickup, "--original",
                                    "--modified", "--env",
                                    fixture_path("figure3_env")});
    CHECK(both.exit_code == 2);

    const CliResult envless = run_cli({"project", state, pickup});
    CHECK(envless.exit_code == 2);
    CHECK(envless.err.find("--env") != std::string::npos);
  }

  TEST_CASE("query prints the guard marginal") {
    const CliResult r = run_cli(
        {"query", fixture_path("figure1_state"), "--target", "guard"});
    CHECK(r.exit_code == 0);
    const auto rows = parse_query_rows(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::fabs(rows.at("no") - 0.710696) < 1e-9);
    CHECK(std::fabs(rows.at("yes") - 0.289304) < 1e-9);
    CHECK(r.out.find("guard") != std::string::npos);
  }

  TEST_CASE("query emits machine-readable JSON") {
    const CliResult r =
        run_cli({"query", fixture_path("figure1_state"), "--target",
                 "guard,alarm", "--given", "light=on", "--json"});
    CHECK(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("given").at("light") == "on");
    REQUIRE(doc.at("targets").size() == 2);
    CHECK(doc.at("targets").at(0).at("name") == "alarm");
    CHECK(doc.at("targets").at(1).at("name") == "guard");
    double total = 0;
    for (const auto& p : doc.at("probabilities")) total += p.get<double>();
    CHECK(std::fabs(total - 1.0) < 1e-12);

    // Same numbers the library reports.
    const auto bn =
        std::get<BeliefNetwork>(load_fixture("figure1_state"));
    const Dist d = marginal(bn, {"guard", "alarm"}, {{"light", "on"}});
    REQUIRE(doc.at("probabilities").size() == d.probabilities.size());
    for (std::size_t i = 0; i < d.probabilities.size(); ++i)
      CHECK(doc.at("probabilities").at(i).get<double>() ==
            doctest::Approx(d.probabilities[i]).epsilon(1e-15));
  }

  TEST_CASE("query failures use the domain exit code") {
    BeliefNetwork point;
    point.nodes = {{"a", {"f", "t"}}};
    point.cpts = {{"a", {}, {{1.0, 0.0}}}};
    const std::string path = write_doc("point.bnw", point);

    const CliResult zero =
        run_cli({"query", path, "--target", "a", "--given", "a=t"});
    CHECK(zero.exit_code == 1);

    const CliResult unknown = run_cli(
        {"query", fixture_path("figure1_state"), "--target", "laser"});
    CHECK(unknown.exit_code == 1);

    const CliResult malformed = run_cli(
        {"query", fixture_path("figure1_state"), "--target", "guard",
         "--given", "light"});
    CHECK(malformed.exit_code == 2);
    CHECK(malformed.err.find("name=value") != std::string::npos);
  }

  TEST_CASE("check accepts the bundled state and flags a perturbed one") {
    const CliResult ok = run_cli({"check", fixture_path("figure1_state"),
                                  fixture_path("figure3_env")});
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("consistent (tol") != std::string::npos);
    CHECK(ok.out.find("unverifiable") != std::string::npos);

    auto bn = std::get<BeliefNetwork>(load_fixture("figure1_state"));
    for (Cpt& c : bn.cpts)
      if (c.child == "alarm") c.rows[0] = {0.98, 0.02};
    const std::string skewed = write_doc("skewed.bnw", bn);
    const CliResult bad =
        run_cli({"check", skewed, fixture_path("figure3_env")});
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("inconsistent (tol") != std::string::npos);

    const CliResult loose = run_cli(
        {"check", skewed, fixture_path("figure3_env"), "--tol", "0.05"});
    CHECK(loose.exit_code == 0);
  }

  TEST_CASE("dsep names the verdict for any model kind") {
    const std::string state = fixture_path("figure1_state");
    const CliResult apart = run_cli({"dsep", state, "light", "sound"});
    CHECK(apart.exit_code == 0);
    CHECK(apart.out == "d-separated\n");

    const CliResult linked =
        run_cli({"dsep", state, "light", "sound", "alarm"});
    CHECK(linked.exit_code == 0);
    CHECK(linked.out == "not d-separated\n");

    const CliResult env = run_cli(
        {"dsep", fixture_path("figure3_env"), "light,motion", "sound"});
    CHECK(env.exit_code == 0);
    CHECK(env.out == "d-separated\n");
  }

  TEST_CASE("sample is reproducible and labels sorted columns") {
    const std::string state = fixture_path("figure1_state");
    const std::string a = temp_path("a.csv");
    const std::string b = temp_path("b.csv");
    CHECK(run_cli({"sample", state, "-n", "50", "--seed", "7", "--out", a})
              .exit_code == 0);
    CHECK(run_cli({"sample", state, "-n", "50", "--seed", "7", "--out", b})
              .exit_code == 0);
    const std::string text = read_text_file(a);
    CHECK(text == read_text_file(b));

    std::istringstream lines(text);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "alarm,guard,light,location,motion,size,sound,weight");
    std::size_t rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 50);

    const CliResult other =
        run_cli({"sample", state, "-n", "50", "--seed", "8"});
    CHECK(other.exit_code == 0);
    CHECK(other.out != text);
  }

  TEST_CASE("dot prints a graph") {
    const CliResult r = run_cli({"dot", fixture_path("figure1_state")});
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("digraph model {", 0) == 0);
  }

  TEST_CASE("fixture lists, prints, and refuses bad requests") {
    const CliResult list = run_cli({"fixture"});
    CHECK(list.exit_code == 0);
    for (const std::string& name : fixture_names())
      CHECK(list.out.find(name) != std::string::npos);

    const CliResult one = run_cli({"fixture", "figure2_pickup"});
    CHECK(one.exit_code == 0);
    CHECK(one.out == serialize_model(load_fixture("figure2_pickup")));

    for (const std::string& name : fixture_names())
      CHECK(read_text_file(fixture_path(name)) ==
            serialize_model(load_fixture(name)));

    CHECK(run_cli({"fixture", "figure9"}).exit_code == 1);
    CHECK(run_cli({"fixture", "figure1_state", "--dir", fixture_dir()})
              .exit_code == 2);
  }

  TEST_CASE("kernel override leaves answers byte-identical") {
    const std::vector<std::string> args = {
        "query", fixture_path("figure1_state"), "--target", "guard,alarm",
        "--given", "motion=on"};
    const CliResult plain = run_cli(args);
    const CliResult scalar = run_cli(args, "PROBACT_KERNELS=scalar");
    CHECK(plain.exit_code == 0);
    CHECK(scalar.exit_code == 0);
    CHECK(plain.out == scalar.out);
  }

  TEST_CASE("bad invocations exit with the usage code") {
    CHECK(run_cli({}).exit_code == 2);
    CHECK(run_cli({"conjure"}).exit_code == 2);
    CHECK(run_cli({"query", fixture_path("figure1_state")}).exit_code == 2);
    CHECK(run_cli({"--help"}).exit_code == 0);
  }
}
