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

// Scenario and knowledge-base builders shared by the test binaries.

#include <string>
#include <vector>

#include "mrsim/scenario.hpp"
#include "mrsim/simulation.hpp"

namespace mrsim::fixture {

inline TaskSpec task(std::string label, CapabilitySet required) {
  return TaskSpec{std::move(label), std::move(required)};
}

/// Pb2 of the worked allocation example.
inline PlanBlueprint pb2() {
  return PlanBlueprint{"Pb2",
                       {task("T1", {"C1", "C3", "C4"}), task("T2", {"C2"}), task("T3", {"C2", "C5"})}};
}

inline CapabilitySet universe5() { return {"C1", "C2", "C3", "C4", "C5"}; }

inline RobotSpec robot(RobotId id, CapabilitySet caps, SimTime min_d, SimTime max_d,
                       std::int64_t history = 0, bool registered = true, double fail = 0.0) {
  RobotSpec spec;
  spec.agent = RobotAgentConfig{std::move(id), std::move(caps), min_d, max_d, fail};
  spec.registered = registered;
  spec.history = history;
  return spec;
}

/// R1 {C1..C4} history 9 and R3 {C2,C5} history 11 registered, R2 {C2}
/// known but unregistered, Pb2 in the KB, fixed task duration `d`.
inline Scenario worked_example(SimTime d = 1, SimTime duration = 20) {
  Scenario sc;
  sc.name = "worked_example";
  sc.master_seed = 7;
  sc.duration = duration;
  sc.capability_universe = universe5();
  sc.robots = {robot("R1", {"C1", "C2", "C3", "C4"}, d, d, 9),
               robot("R2", {"C2"}, d, d, 0, false),
               robot("R3", {"C2", "C5"}, d, d, 11)};
  sc.blueprints = {pb2()};
  return sc;
}

/// Knowledge base in the worked_example state, without any simulation around it.
inline KnowledgeBase worked_example_kb() {
  KnowledgeBase kb;
  kb.blueprints.emplace("Pb2", pb2());
  auto add = [&kb](RobotId id, CapabilitySet caps, std::int64_t history, RobotState state) {
    RobotRecord rec;
    rec.id = id;
    rec.capabilities = std::move(caps);
    rec.history = history;
    rec.state = state;
    kb.robots.emplace(std::move(id), std::move(rec));
  };
  add("R1", {"C1", "C2", "C3", "C4"}, 9, RobotState::Idle);
  add("R2", {"C2"}, 0, RobotState::Unregistered);
  add("R3", {"C2", "C5"}, 11, RobotState::Idle);
  return kb;
}

inline ScriptedRequest request(SimTime time, std::string id, std::string bp) {
  return ScriptedRequest{time, std::move(id), std::move(bp), {}};
}

inline std::string scenario_dir() { return MRSIM_SCENARIO_DIR; }

/// One request per scenario, each driving a different terminal failure.
struct FailureCase {
  FailureKind kind;
  Scenario scenario;
};

inline std::vector<FailureCase> failure_matrix() {
  std::vector<FailureCase> out;

  {
    Scenario sc = worked_example(1, 10);
    sc.name = "no-blueprint-match";
    sc.workload.requests = {request(0, "Rq1", "Missing")};
    out.push_back({FailureKind::NoBlueprintMatch, sc});
  }
  {
    Scenario sc = worked_example(1, 10);
    sc.name = "insufficient-robots";
    sc.robots[2].registered = false;  // only R1 left
    sc.workload.requests = {request(0, "Rq1", "Pb2")};
    out.push_back({FailureKind::InsufficientRobots, sc});
  }
  {
    Scenario sc = worked_example(1, 10);
    sc.name = "no-capable-robot";
    sc.capability_universe.insert("C9");
    sc.blueprints.push_back(PlanBlueprint{"Pb9", {task("T1", {"C2"}), task("T2", {"C9"})}});
    sc.workload.requests = {request(0, "Rq1", "Pb9")};
    out.push_back({FailureKind::NoCapableRobot, sc});
  }
  {
    // R1 drops out while holding T1 and its completion never arrives.
    Scenario sc = worked_example(5, 30);
    sc.name = "task-feedback-timeout";
    sc.policies.deregistration = DeregistrationPolicy::Immediate;
    sc.workload.requests = {request(0, "Rq1", "Pb2")};
    Command dereg;
    dereg.kind = CommandKind::DeregisterRobot;
    dereg.id = "c1";
    dereg.robot = "R1";
    sc.commands = {ScriptedCommand{1, dereg}};
    out.push_back({FailureKind::TaskFeedbackTimeout, sc});
  }
  {
    Scenario sc = worked_example(1, 10);
    sc.name = "task-negative-feedback";
    sc.robots[0].agent.fail_probability = 1.0;
    sc.workload.requests = {request(0, "Rq1", "Pb2")};
    out.push_back({FailureKind::TaskNegativeFeedback, sc});
  }
  {
    // Three 2-unit tasks cannot finish inside a 3-unit plan window.
    Scenario sc = worked_example(2, 12);
    sc.name = "plan-feedback-timeout";
    sc.timeouts.plan_feedback = 3;
    sc.workload.requests = {request(0, "Rq1", "Pb2")};
    out.push_back({FailureKind::PlanFeedbackTimeout, sc});
  }
  return out;
}

/// Five single-task requests at t=0, two identical robots, fixed duration.
inline Scenario burst(SimTime d = 2) {
  Scenario sc;
  sc.name = "burst";
  sc.master_seed = 3;
  sc.duration = 20;
  sc.capability_universe = {"C1"};
  sc.robots = {robot("A", {"C1"}, d, d), robot("B", {"C1"}, d, d)};
  sc.blueprints = {PlanBlueprint{"Single", {task("T1", {"C1"})}}};
  for (int i = 1; i <= 5; ++i) sc.workload.requests.push_back(request(0, "Rq" + std::to_string(i), "Single"));
  return sc;
}

}  // namespace mrsim::fixture
