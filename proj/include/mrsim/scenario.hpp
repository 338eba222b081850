// Copyright 2026 The mrsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/codec.hpp"
#include "mrsim/command.hpp"
#include "mrsim/domain.hpp"
#include "mrsim/robot_agent.hpp"
#include "mrsim/robots_manager.hpp"

namespace mrsim {

struct RobotSpec {
  RobotAgentConfig agent;
  bool registered = true;
  std::int64_t history = 0;
};

struct ScriptedRequest {
  SimTime time = 0;
  std::string id;
  std::string blueprint_id;
  std::string requestor;  // empty: the scenario's default requestor
};

/// requests_per_tick requests at the start of every tick, each naming a
/// blueprint drawn uniformly from the pool on the `requests` stream.
struct RequestGenerator {
  std::int64_t requests_per_tick = 1;
  std::vector<std::string> blueprint_pool;
  std::string id_prefix = "Rq";
};

struct Workload {
  std::vector<ScriptedRequest> requests;
  std::optional<RequestGenerator> generator;
};

struct ChurnConfig {
  bool enabled = false;
  std::int64_t steps_per_tick = 1;
};

struct Timeouts {
  SimTime plan_feedback = 20;
  SimTime task_feedback = 10;
};

struct Policies {
  std::size_t min_robots = 2;
  DeregistrationPolicy deregistration = DeregistrationPolicy::Defer;
};

struct ScriptedCommand {
  SimTime time = 0;
  Command command;
};

struct Scenario {
  std::string name;
  std::uint64_t master_seed = 0;
  SimTime duration = 0;
  SimTime units_per_tick = 1;
  SimTime bus_latency = 0;
  std::string requestor = "requestor";
  CapabilitySet capability_universe;
  std::vector<RobotSpec> robots;
  std::vector<PlanBlueprint> blueprints;
  Workload workload;
  ChurnConfig churn;
  Timeouts timeouts;
  Policies policies;
  std::vector<ScriptedCommand> commands;

  std::int64_t ticks() const { return duration / units_per_tick; }
};

struct ScenarioLoad {
  std::optional<Scenario> scenario;
  // "path: message" diagnostics, e.g. "robots[1].duration_range: ...".
  std::vector<std::string> errors;

  bool ok() const { return scenario.has_value(); }
};

ScenarioLoad load_scenario(const Json& doc);
ScenarioLoad load_scenario_file(const std::filesystem::path& path);

/// Cross-reference and range checks on an already-built scenario.
std::vector<std::string> validate_scenario(const Scenario& sc);

Json scenario_to_json(const Scenario& sc);

}  // namespace mrsim
