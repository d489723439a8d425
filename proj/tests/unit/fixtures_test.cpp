#include <string>
#include <variant>

#include "doctest.h"
#include "probact/fixtures.hpp"
#include "probact/network.hpp"

using namespace probact;

TEST_SUITE("fixtures") {
  TEST_CASE("the bundle holds the four warehouse models") {
    CHECK(fixture_names() ==
          std::vector<std::string>{"figure1_state", "figure2_pickup",
                                   "figure3_env", "silent_move"});
    CHECK(fixture_filename("figure1_state") == "figure1_state.bnw");
    CHECK(fixture_filename("figure2_pickup") == "figure2_pickup.act");
    CHECK(fixture_filename("figure3_env") == "figure3_env.env");
    CHECK(fixture_filename("silent_move") == "silent_move.act");
    CHECK_THROWS_AS((void)load_fixture("figure9"), ModelError);
    CHECK_THROWS_AS((void)fixture_filename("figure9"), ModelError);
  }

  TEST_CASE("every fixture carries its provenance note") {
    for (const std::string& name : fixture_names()) {
      const std::string text = serialize_model(load_fixture(name));
      CHECK(text.find("authored for these examples") != std::string::npos);
    }
    const std::string pickup =
        serialize_model(load_fixture("figure2_pickup"));
    CHECK(pickup.find("light sensor") != std::string::npos);
  }

  TEST_CASE("the checked-in files match the in-code models byte for byte") {
    for (const std::string& name : fixture_names()) {
      CAPTURE(name);
      const std::string path =
          std::string(PROBACT_DATA_DIR) + "/" + fixture_filename(name);
      CHECK(read_text_file(path) == serialize_model(load_fixture(name)));
    }
  }

  TEST_CASE("the state network has the documented shape") {
    const auto bn = std::get<BeliefNetwork>(load_fixture("figure1_state"));
    CHECK(bn.nodes.size() == 8);
    CHECK(bn.arcs.size() == 5);
    CHECK(validate_network(bn).valid());
    CHECK(find_node(bn, "location")->domain ==
          std::vector<std::string>{"shelf", "floor", "bay"});
    CHECK(find_cpt(bn, "alarm")->parents ==
          std::vector<std::string>{"light", "sound", "motion"});
  }

  TEST_CASE("the environment splits sensing from consequence") {
    const auto v = std::get<EnvironmentModel>(load_fixture("figure3_env"));
    std::vector<std::string> free, bound;
    for (const Distinction& d : v.cbn.free_nodes) free.push_back(d.name);
    for (const Distinction& d : v.cbn.bound_nodes) bound.push_back(d.name);
    CHECK(free == std::vector<std::string>{"location", "light", "sound",
                                           "motion"});
    CHECK(bound ==
          std::vector<std::string>{"size", "weight", "alarm", "guard"});
  }

  TEST_CASE("the silent move only relocates") {
    const auto a = std::get<ActionModel>(load_fixture("silent_move"));
    CHECK(qualification(a) == std::vector<std::string>{"location"});
    CHECK(effects(a) == std::vector<std::string>{"location"});
    CHECK(validate_action(a).valid());
  }
}
