#include "probact/fixtures.hpp"

#include "probact/cbn.hpp"

namespace probact {

namespace {

const char* kAuthored =
    "Probabilities are illustrative values authored for these examples.";

Distinction location_d() { return {"location", {"shelf", "floor", "bay"}}; }
Distinction light_d() { return {"light", {"off", "on"}}; }
Distinction sound_d() { return {"sound", {"off", "on"}}; }
Distinction motion_d() { return {"motion", {"off", "on"}}; }
Distinction size_d() { return {"size", {"small", "large"}}; }
Distinction weight_d() { return {"weight", {"light", "heavy"}}; }
Distinction alarm_d() { return {"alarm", {"off", "on"}}; }
Distinction guard_d() { return {"guard", {"no", "yes"}}; }

EnvironmentModel figure3_env() {
  ConditionalBeliefNet cbn;
  cbn.free_nodes = {location_d(), light_d(), sound_d(), motion_d()};
  cbn.bound_nodes = {size_d(), weight_d(), alarm_d(), guard_d()};
  cbn.arcs = {{"size", "weight"},
              {"light", "alarm"},
              {"sound", "alarm"},
              {"motion", "alarm"},
              {"alarm", "guard"}};
  cbn.cpts = {
      {"size", {}, {{0.6, 0.4}}},
      {"weight", {"size"}, {{0.8, 0.2}, {0.25, 0.75}}},
      {"alarm",
       {"light", "sound", "motion"},
       {{0.99, 0.01},
        {0.3, 0.7},
        {0.25, 0.75},
        {0.1, 0.9},
        {0.2, 0.8},
        {0.07, 0.93},
        {0.05, 0.95},
        {0.02, 0.98}}},
      {"guard", {"alarm"}, {{0.95, 0.05}, {0.35, 0.65}}},
  };
  cbn.notes =
      std::string("Warehouse environment fragment: how size, weight, alarm, "
                  "and guard respond to the free distinctions. ") +
      kAuthored;
  return EnvironmentModel{std::move(cbn)};
}

BeliefNetwork figure1_state() {
  BeliefNetwork prior;
  prior.nodes = {location_d(), light_d(), sound_d(), motion_d()};
  prior.cpts = {
      {"location", {}, {{0.5, 0.3, 0.2}}},
      {"light", {}, {{0.8, 0.2}}},
      {"sound", {}, {{0.7, 0.3}}},
      {"motion", {}, {{0.9, 0.1}}},
  };
  BeliefNetwork bn = bind(figure3_env().cbn, prior);
  bn.notes = std::string("Warehouse robot initial state. ") + kAuthored;
  return bn;
}

ActionModel figure2_pickup() {
  ActionModel a;
  a.name = "pickup";
  a.cbn.free_nodes = {location_d(), size_d(), weight_d(), sound_d(),
                      motion_d()};
  a.cbn.bound_nodes = {
      {"location@next", {"shelf", "floor", "bay"}},
      {"sound@next", {"off", "on"}},
      {"motion@next", {"off", "on"}},
  };
  a.cbn.arcs = {{"location", "location@next"}, {"size", "location@next"},
                {"weight", "location@next"},   {"sound", "sound@next"},
                {"location@next", "sound@next"}, {"motion", "motion@next"},
                {"location@next", "motion@next"}};
  a.cbn.cpts = {
      {"location@next",
       {"location", "size", "weight"},
       {{0.05, 0.05, 0.90},
        {0.15, 0.10, 0.75},
        {0.10, 0.15, 0.75},
        {0.30, 0.20, 0.50},
        {0.02, 0.08, 0.90},
        {0.05, 0.20, 0.75},
        {0.04, 0.24, 0.72},
        {0.10, 0.42, 0.48},
        {0.01, 0.02, 0.97},
        {0.02, 0.06, 0.92},
        {0.02, 0.05, 0.93},
        {0.05, 0.15, 0.80}}},
      {"sound@next",
       {"sound", "location@next"},
       {{0.92, 0.08},
        {0.25, 0.75},
        {0.85, 0.15},
        {0.35, 0.65},
        {0.05, 0.95},
        {0.20, 0.80}}},
      {"motion@next",
       {"motion", "location@next"},
       {{0.90, 0.10},
        {0.70, 0.30},
        {0.60, 0.40},
        {0.40, 0.60},
        {0.15, 0.85},
        {0.10, 0.90}}},
  };
  a.cbn.notes =
      std::string("Pickup action for the warehouse robot. ") + kAuthored +
      " The light sensor is treated as unaffected by the action and is "
      "deliberately left out of the qualification.";
  return a;
}

ActionModel silent_move() {
  ActionModel a;
  a.name = "silent_move";
  a.cbn.free_nodes = {location_d()};
  a.cbn.bound_nodes = {{"location@next", {"shelf", "floor", "bay"}}};
  a.cbn.arcs = {{"location", "location@next"}};
  a.cbn.cpts = {
      {"location@next",
       {"location"},
       {{0.10, 0.02, 0.88}, {0.03, 0.12, 0.85}, {0.01, 0.01, 0.98}}},
  };
  a.cbn.notes =
      std::string("Relocation action that disturbs nothing but location. ") +
      kAuthored;
  return a;
}

}  // namespace

std::vector<std::string> fixture_names() {
  return {"figure1_state", "figure2_pickup", "figure3_env", "silent_move"};
}

std::string fixture_filename(const std::string& name) {
  if (name == "figure1_state") return "figure1_state.bnw";
  if (name == "figure2_pickup") return "figure2_pickup.act";
  if (name == "figure3_env") return "figure3_env.env";
  if (name == "silent_move") return "silent_move.act";
  throw ModelError("unknown fixture '" + name + "'");
}

ParsedModel load_fixture(const std::string& name) {
  if (name == "figure1_state") return figure1_state();
  if (name == "figure2_pickup") return figure2_pickup();
  if (name == "figure3_env") return figure3_env();
  if (name == "silent_move") return silent_move();
  throw ModelError("unknown fixture '" + name + "'");
}

}  // namespace probact
