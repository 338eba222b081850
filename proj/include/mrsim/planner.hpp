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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mrsim/bus.hpp"
#include "mrsim/domain.hpp"
#include "mrsim/engine.hpp"

namespace mrsim {

struct SnapshotRobot {
  RobotId id;
  CapabilitySet capabilities;
  std::int64_t history = 0;
};

/// Registered robots at the planning instant, ordered by id. Robots with a
/// deferred departure pending are left out.
struct PlannerSnapshot {
  std::vector<SnapshotRobot> robots;

  static PlannerSnapshot of(const KnowledgeBase& kb);
};

/// Robots previously picked by a random tie-break.
using TieMarks = std::set<RobotId>;
using LoadMap = std::map<RobotId, std::int64_t>;

/// One task decision: the tentative loads of the eligible robots when the task
/// was placed, and the robot that got it.
struct PlanningDecision {
  std::string task;
  RobotId robot;
  LoadMap tentative;
};

struct PlanOutcome {
  std::optional<VerifiedPlan> plan;
  std::optional<FailureReason> error;
  std::vector<PlanningDecision> decisions;

  bool ok() const { return plan.has_value(); }
};

/// Registered robots able to execute the task, in id order.
std::vector<RobotId> eligible(const TaskSpec& task, const PlannerSnapshot& snap);

/// Picks a robot of minimal tentative load among `candidates`.
///
/// A unique minimum is returned as is. Ties are broken by a uniform draw on
/// `rng` among the tied robots that are not yet marked; the winner is marked.
/// Once every tied robot is marked, the marks of the tied group are cleared
/// except for the winner's, so the same group never yields the same robot on
/// two consecutive ties. Throws std::invalid_argument for no candidates.
RobotId select_robot(const std::vector<RobotId>& candidates, const LoadMap& tentative,
                     TieMarks& marks, RngStream& rng);

/// Turns a blueprint into a verified plan over the snapshot. Each robot's
/// tentative load is its history plus the tasks already placed on it by this
/// call. `marks` and `rng` are updated by tie-breaks.
PlanOutcome plan(const PlanBlueprint& bp, const std::string& request_id,
                 const PlannerSnapshot& snap, std::size_t min_robots, TieMarks& marks,
                 RngStream& rng);

struct PlanningRecord {
  std::string request_id;
  SimTime at = 0;
  PlanOutcome outcome;
};

/// Bus component: BLUEPRINT_TO_PLANNER in, PLAN_VERIFIED to the robots manager
/// or PLAN_FAIL to the requests manager out.
class Planner {
 public:
  Planner(Bus& bus, const KnowledgeBase& kb, std::size_t min_robots = 2);

  void on_blueprint(const Envelope& env);

  void set_record_sink(std::function<void(const PlanningRecord&)> sink) {
    record_sink_ = std::move(sink);
  }

  const TieMarks& tie_marks() const { return marks_; }
  const std::optional<VerifiedPlan>& last_plan() const { return last_plan_; }
  std::size_t min_robots() const { return min_robots_; }

 private:
  Bus& bus_;
  const KnowledgeBase& kb_;
  std::size_t min_robots_;
  TieMarks marks_;
  std::optional<VerifiedPlan> last_plan_;
  std::function<void(const PlanningRecord&)> record_sink_;
};

}  // namespace mrsim
