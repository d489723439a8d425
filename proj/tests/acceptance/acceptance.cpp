// Release gate: every check this binary prints must PASS before shipping.
// Each criterion is independent; a throw inside one fails only that line.

#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "probact/fixtures.hpp"
#include "probact/inference.hpp"
#include "probact/io.hpp"
#include "probact/network.hpp"
#include "probact/projection.hpp"
#include "probact/surgery.hpp"
#include "testutil.hpp"

using namespace probact;
using testutil::all_assignments;
using testutil::max_abs_diff;
using testutil::pick;
using testutil::random_binary_network;
using testutil::random_model;
using testutil::random_triple;
using testutil::Rng;
using testutil::unit;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const std::string& v : s) {
    if (!out.empty()) out += ", ";
    out += v;
  }
  return "{" + out + "}";
}

// Shared projections: the bundled robot scenario plus 100 random
// environment/action/state triples, built once.
struct Corpus {
  ProjectionResult original;
  ProjectionResult modified;
  ProjectionResult sequence;
  std::vector<testutil::Triple> triples;
  std::vector<ProjectionResult> runs;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    const auto state = std::get<BeliefNetwork>(load_fixture("figure1_state"));
    const auto pickup = std::get<ActionModel>(load_fixture("figure2_pickup"));
    const auto env = std::get<EnvironmentModel>(load_fixture("figure3_env"));
    const auto move = std::get<ActionModel>(load_fixture("silent_move"));
    out.original = project_original(state, pickup);
    out.modified = project_modified(state, pickup, env);
    out.sequence = project_sequence(state, {pickup, move}, env);
    Rng rng(505);
    for (int i = 0; i < 100; ++i) {
      out.triples.push_back(random_triple(rng, 10));
      const testutil::Triple& t = out.triples.back();
      out.runs.push_back(project_modified(t.state, t.action, t.env));
    }
    return out;
  }();
  return c;
}

// 1. Variable elimination against the enumeration oracle.
Outcome criterion1() {
  Rng rng(101);
  double worst = 0.0;
  int zero_draws = 0;
  for (int t = 0; t < 200; ++t) {
    const BeliefNetwork bn = random_binary_network(rng, 12);
    std::set<std::string> tset;
    const std::size_t want =
        1 + pick(rng, std::min<std::size_t>(2, bn.nodes.size()));
    while (tset.size() < want)
      tset.insert(bn.nodes[pick(rng, bn.nodes.size())].name);
    const std::vector<std::string> targets(tset.begin(), tset.end());
    Assignment evidence;
    for (const Distinction& d : bn.nodes)
      if (!tset.count(d.name) && unit(rng) < 0.25)
        evidence[d.name] = d.domain[pick(rng, d.domain.size())];

    bool impossible = false;
    Dist expect;
    try {
      expect = enumerate_marginal(bn, targets, evidence);
    } catch (const ZeroEvidenceError&) {
      impossible = true;
    }
    if (impossible) {
      ++zero_draws;
      try {
        (void)marginal(bn, targets, evidence);
        return {false, "trial " + std::to_string(t) +
                           ": elimination accepted evidence the enumeration "
                           "oracle calls impossible"};
      } catch (const ZeroEvidenceError&) {
      }
      continue;
    }
    const Dist got = marginal(bn, targets, evidence);
    const double gap = max_abs_diff(got.probabilities, expect.probabilities);
    worst = std::max(worst, gap);
    if (gap > 1e-9)
      return {false, "trial " + std::to_string(t) +
                         ": elimination drifts from enumeration by " +
                         fmt(gap)};
  }
  return {true,
          "200 random networks of up to 12 nodes: elimination matches "
          "enumeration, worst gap " +
              fmt(worst) + ", " + std::to_string(zero_draws) +
              " impossible-evidence draws rejected by both routes"};
}

// 2. Arc reversal preserves the joint; node removal preserves marginals.
Outcome criterion2() {
  Rng rng(202);
  double worst_joint = 0.0, worst_marginal = 0.0;
  std::size_t reversals = 0, removals = 0;
  for (int t = 0; t < 200; ++t) {
    const BeliefNetwork bn = random_binary_network(rng, 10);
    const std::vector<Assignment> states = all_assignments(bn);
    std::vector<double> joint(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
      joint[i] = joint_probability(bn, states[i]);

    for (const Arc& arc : bn.arcs) {
      BeliefNetwork reversed;
      try {
        reversed = reverse_arc(bn, arc.from, arc.to);
      } catch (const ModelError&) {
        continue;  // another directed path blocks this reversal
      }
      ++reversals;
      for (std::size_t i = 0; i < states.size(); ++i) {
        const double gap =
            std::fabs(joint_probability(reversed, states[i]) - joint[i]);
        worst_joint = std::max(worst_joint, gap);
        if (gap > 1e-9)
          return {false, "trial " + std::to_string(t) + ": reversing " +
                             arc.from + "->" + arc.to +
                             " shifts a joint value by " + fmt(gap)};
      }
    }

    std::map<std::string, std::vector<double>> before;
    for (const Distinction& d : bn.nodes)
      before[d.name] = marginal(bn, {d.name}).probabilities;
    for (const Distinction& d : bn.nodes) {
      const BeliefNetwork cut = remove_node(bn, d.name);
      ++removals;
      for (const Distinction& s : cut.nodes) {
        const double gap = max_abs_diff(
            marginal(cut, {s.name}).probabilities, before[s.name]);
        worst_marginal = std::max(worst_marginal, gap);
        if (gap > 1e-9)
          return {false, "trial " + std::to_string(t) + ": removing " +
                             d.name + " shifts the marginal of " + s.name +
                             " by " + fmt(gap)};
      }
    }
  }
  return {true, "200 random networks of up to 10 nodes: " +
                    std::to_string(reversals) +
                    " reversals joint-preserving (worst gap " +
                    fmt(worst_joint) + "), " + std::to_string(removals) +
                    " removals marginal-preserving (worst gap " +
                    fmt(worst_marginal) + ")"};
}

// 3. The pickup unroll labels effects and re-points sensing correctly.
Outcome criterion3() {
  const ProjectionResult& pr = corpus().original;
  const std::set<std::string> direct = {"location", "sound", "motion"};
  const std::set<std::string> indirect = {"alarm", "guard"};
  const std::set<std::string> persisted = {"light", "size", "weight"};
  if (pr.direct_effects != direct)
    return {false, "direct effects are " + join(pr.direct_effects)};
  if (pr.indirect_effects != indirect)
    return {false, "indirect effects are " + join(pr.indirect_effects)};
  if (pr.persisted != persisted)
    return {false, "persisted distinctions are " + join(pr.persisted)};
  const Cpt* alarm = find_cpt(pr.combined, "alarm@1");
  if (alarm == nullptr) return {false, "alarm@1 has no table"};
  const std::set<std::string> got(alarm->parents.begin(),
                                  alarm->parents.end());
  const std::set<std::string> expect = {"light@0", "sound@1", "motion@1"};
  if (got != expect)
    return {false, "alarm@1 is conditioned on " + join(got)};
  if (pr.latest.at("light").render() != "light@0")
    return {false, "light did not persist as light@0"};
  return {true,
          "pickup unroll: direct {location, sound, motion}, indirect "
          "{alarm, guard}, alarm@1 conditioned on {light@0, sound@1, "
          "motion@1}, light persisted"};
}

// 4. Environment-model unrolling agrees with the state-only variant, and a
// quiet follow-up action copies nothing it does not disturb.
Outcome criterion4() {
  const Corpus& c = corpus();
  if (!structurally_equal(c.modified.combined, c.original.combined))
    return {false,
            "environment unroll of the pickup differs from the state-only "
            "unroll"};
  for (const char* base : {"sound", "motion", "alarm", "guard"}) {
    const std::string copy = std::string(base) + "@2";
    if (find_node(c.sequence.combined, copy) != nullptr)
      return {false, "silent_move produced an unwanted copy " + copy};
  }
  if (find_node(c.sequence.combined, "location@2") == nullptr)
    return {false, "silent_move failed to produce location@2"};
  return {true,
          "environment unroll matches the state-only unroll; after "
          "silent_move only location gains a slice-2 copy"};
}

// 5. Projected successors of consistent states stay consistent.
Outcome criterion5() {
  const Corpus& c = corpus();
  double worst = 0.0;
  for (std::size_t i = 0; i < c.runs.size(); ++i) {
    const BeliefNetwork successor = extract_successor(c.runs[i]);
    const ConsistencyReport rep =
        check_consistency(successor, c.triples[i].env, 1e-6);
    worst = std::max(worst, rep.worst);
    if (!rep.consistent)
      return {false, "triple " + std::to_string(i) +
                         ": successor deviates by " + fmt(rep.worst)};
  }
  return {true, std::to_string(c.runs.size()) + "/" +
                    std::to_string(c.runs.size()) +
                    " projected successors consistent with their "
                    "environments at 1e-06 (worst row deviation " +
                    fmt(worst) + ")"};
}

// 6. Extraction keeps every latest-slice marginal.
Outcome criterion6() {
  const Corpus& c = corpus();
  double worst = 0.0;
  std::size_t nets = 0, nodes = 0;
  auto check = [&](const ProjectionResult& pr) -> std::optional<std::string> {
    const BeliefNetwork successor = extract_successor(pr);
    ++nets;
    for (const Distinction& d : successor.nodes) {
      const std::string timed = pr.latest.at(d.name).render();
      const double gap =
          max_abs_diff(marginal(successor, {d.name}).probabilities,
                       marginal(pr.combined, {timed}).probabilities);
      worst = std::max(worst, gap);
      ++nodes;
      if (gap > 1e-9)
        return "node " + d.name + " drifts by " + fmt(gap) +
               " after extraction";
    }
    return std::nullopt;
  };
  if (auto bad = check(c.original)) return {false, "pickup unroll: " + *bad};
  if (auto bad = check(c.modified))
    return {false, "environment pickup unroll: " + *bad};
  if (auto bad = check(c.sequence)) return {false, "sequence unroll: " + *bad};
  for (std::size_t i = 0; i < c.runs.size(); ++i)
    if (auto bad = check(c.runs[i]))
      return {false, "triple " + std::to_string(i) + ": " + *bad};
  return {true, "extraction preserves latest-slice marginals across " +
                    std::to_string(nets) + " projections and " +
                    std::to_string(nodes) + " nodes (worst gap " +
                    fmt(worst) + ")"};
}

// 7. Forward samples of the unrolled pickup match analytic marginals.
Outcome criterion7() {
  const BeliefNetwork& net = corpus().modified.combined;
  const std::size_t n = 100000;
  const std::vector<Assignment> samples = forward_sample(net, n, 20260816);
  const std::vector<std::string> watched = {"location@1", "sound@1",
                                            "motion@1", "alarm@1", "guard@1"};
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const Assignment& s : samples)
    for (const std::string& name : watched) ++counts[name][s.at(name)];

  double worst_z = 0.0;
  std::size_t values = 0;
  for (const std::string& name : watched) {
    const Distinction* d = find_node(net, name);
    if (d == nullptr) return {false, name + " missing from the unroll"};
    const Dist analytic = marginal(net, {name});
    for (std::size_t k = 0; k < d->domain.size(); ++k) {
      const double p = analytic.probabilities[k];
      const double emp =
          double(counts[name][d->domain[k]]) / double(n);
      const double se = std::sqrt(p * (1.0 - p) / double(n));
      const double z = std::fabs(emp - p) / se;
      worst_z = std::max(worst_z, z);
      ++values;
      if (std::fabs(emp - p) > 3.0 * se)
        return {false, name + "=" + d->domain[k] + " sampled at " + fmt(emp) +
                           " against analytic " + fmt(p) + " (" + fmt(z) +
                           " standard errors)"};
    }
  }
  return {true, "100000 samples of the pickup unroll: all " +
                    std::to_string(values) +
                    " latest-slice values within 3 standard errors "
                    "(worst " +
                    fmt(worst_z) + ")"};
}

// 8. The command line refuses an action that rewrites a bound distinction
// and accepts it only under the documented override flag.
Outcome criterion8() {
  const std::string state_path = testutil::temp_path("acc_state.bnw");
  const std::string env_path = testutil::temp_path("acc_env.env");
  const std::string mute_path = testutil::temp_path("acc_mute.act");
  write_text_file(state_path, serialize_model(load_fixture("figure1_state")));
  write_text_file(env_path, serialize_model(load_fixture("figure3_env")));

  ActionModel mute;
  mute.name = "mute";
  mute.cbn.free_nodes = {{"sound", {"off", "on"}}};
  mute.cbn.bound_nodes = {{"alarm@next", {"off", "on"}}};
  mute.cbn.arcs = {{"sound", "alarm@next"}};
  mute.cbn.cpts = {{"alarm@next", {"sound"}, {{0.99, 0.01}, {0.95, 0.05}}}};
  write_text_file(mute_path, serialize_model(mute));

  const testutil::CliResult refused = testutil::run_cli(
      {"project", state_path, mute_path, "--env", env_path});
  if (refused.exit_code != 1)
    return {false, "rejection exited with " +
                       std::to_string(refused.exit_code) + " instead of 1"};
  if (refused.err.find("rewrites") == std::string::npos)
    return {false, "rejection message does not name the conflict"};

  const testutil::CliResult allowed = testutil::run_cli(
      {"project", state_path, mute_path, "--env", env_path,
       "--allow-incompatible"});
  if (allowed.exit_code != 0)
    return {false, "override exited with " +
                       std::to_string(allowed.exit_code) + " instead of 0"};
  const auto combined = std::get<BeliefNetwork>(parse_model(allowed.out));
  if (find_node(combined, "alarm@1") == nullptr)
    return {false, "override output lacks the rewritten alarm@1"};
  return {true,
          "command line exits 1 refusing a bound-distinction rewrite and "
          "exits 0 under --allow-incompatible"};
}

// 9. Serialization is canonical: reparsing yields identical bytes.
Outcome criterion9() {
  Rng rng(909);
  std::size_t models = 0;
  auto roundtrip =
      [&](const ParsedModel& m,
          const std::string& label) -> std::optional<std::string> {
    const std::string text = serialize_model(m);
    const ParsedModel back = parse_model(text);
    if (back.index() != m.index())
      return label + " reparsed as a different kind";
    if (serialize_model(back) != text) return label + " is not byte-stable";
    if (const auto* bn = std::get_if<BeliefNetwork>(&m))
      if (!structurally_equal(*bn, std::get<BeliefNetwork>(back)))
        return label + " lost structure in the round trip";
    ++models;
    return std::nullopt;
  };
  for (const std::string& name : fixture_names())
    if (auto bad = roundtrip(load_fixture(name), name)) return {false, *bad};
  for (int t = 0; t < 200; ++t)
    if (auto bad = roundtrip(random_model(rng),
                             "random model " + std::to_string(t)))
      return {false, *bad};
  return {true, "4 bundled models and 200 random documents reparse to "
                "identical canonical bytes"};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, Outcome (*)()>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3},
      {4, criterion4}, {5, criterion5}, {6, criterion6},
      {7, criterion7}, {8, criterion8}, {9, criterion9},
  };
  int failures = 0;
  for (const auto& [number, fn] : criteria) {
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("unexpected exception: ") + e.what()};
    }
    std::printf("%s criterion %d: %s\n", outcome.ok ? "PASS" : "FAIL", number,
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
