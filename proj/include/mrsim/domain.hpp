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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mrsim {

/// Simulation time in integer units. One unit is one minute unless the
/// scenario scales ticks with units_per_tick.
using SimTime = std::int64_t;

using CapabilityId = std::string;
using RobotId = std::string;
using CapabilitySet = std::set<CapabilityId>;

struct TaskSpec {
  std::string label;
  CapabilitySet required;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct PlanBlueprint {
  std::string id;
  std::vector<TaskSpec> tasks;

  friend bool operator==(const PlanBlueprint&, const PlanBlueprint&) = default;
};

enum class RequestStatus { Queued, InProgress, Succeeded, Failed };

/// Terminal failure reasons. DuplicateRequest is only ever used to reject a
/// submission whose id is already taken; such a request never enters the
/// queue.
enum class FailureKind {
  NoBlueprintMatch,
  InsufficientRobots,
  NoCapableRobot,
  PlanFeedbackTimeout,
  TaskFeedbackTimeout,
  TaskNegativeFeedback,
  RobotUnavailable,
  DuplicateRequest,
};

struct FailureReason {
  FailureKind kind = FailureKind::NoBlueprintMatch;
  // Task label for NoCapableRobot, empty otherwise.
  std::string task;

  friend bool operator==(const FailureReason&, const FailureReason&) = default;
};

struct Request {
  std::string id;
  std::string requestor;
  std::string blueprint_id;
  SimTime arrival_time = 0;
  RequestStatus status = RequestStatus::Queued;
  std::optional<FailureReason> reason;
};

/// True when the status change is one of the legal request lifecycle edges.
bool is_legal_transition(RequestStatus from, RequestStatus to);

struct Assignment {
  TaskSpec task;
  RobotId robot;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct VerifiedPlan {
  std::string plan_id;
  std::string request_id;
  std::vector<Assignment> assignments;

  friend bool operator==(const VerifiedPlan&, const VerifiedPlan&) = default;
};

enum class RobotState { Unregistered, Idle, Controlled };

/// Time a robot has spent in each state bucket.
struct RobotTimeLedger {
  SimTime controlled = 0;
  SimTime uncontrolled = 0;
  SimTime unregistered = 0;

  SimTime registered() const { return controlled + uncontrolled; }
  SimTime overall() const { return registered() + unregistered; }

  friend bool operator==(const RobotTimeLedger&, const RobotTimeLedger&) = default;
};

struct RobotRecord {
  RobotId id;
  CapabilitySet capabilities;
  std::int64_t history = 0;
  RobotState state = RobotState::Unregistered;
  // Set while Controlled: the task currently held by the robot.
  std::optional<std::string> current_task;
  // Deregistration requested while Controlled under the defer policy.
  bool leaving = false;
  RobotTimeLedger ledger;
  // Time of the last state transition; ledger covers [0, state_since).
  SimTime state_since = 0;
};

/// Blueprint store plus the robot directory shared by the three managers.
struct KnowledgeBase {
  std::map<std::string, PlanBlueprint> blueprints;
  std::map<RobotId, RobotRecord> robots;

  bool is_registered(const RobotId& id) const;
};

/// True iff every capability the task requires is in `robot_caps`.
bool satisfies(const CapabilitySet& robot_caps, const TaskSpec& task);

/// Returns one message per violated rule; empty means the blueprint is valid.
std::vector<std::string> validate_blueprint(const PlanBlueprint& bp,
                                            const CapabilitySet& universe);

std::string_view to_string(RequestStatus s);
std::string_view to_string(FailureKind k);
std::string_view to_string(RobotState s);
std::optional<RequestStatus> parse_request_status(std::string_view s);
std::optional<FailureKind> parse_failure_kind(std::string_view s);
std::optional<RobotState> parse_robot_state(std::string_view s);

/// "NoCapableRobot(T3)" style rendering used in logs and snapshots.
std::string describe(const FailureReason& r);

/// Plan ids follow the request id: Rq2 -> P2, anything else -> P:<id>.
std::string plan_id_for(std::string_view request_id);

}  // namespace mrsim
