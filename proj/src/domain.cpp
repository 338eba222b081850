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

#include "mrsim/domain.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace mrsim {

namespace {

constexpr std::array<std::pair<RequestStatus, std::string_view>, 4> kStatusNames{{
    {RequestStatus::Queued, "Queued"},
    {RequestStatus::InProgress, "InProgress"},
    {RequestStatus::Succeeded, "Succeeded"},
    {RequestStatus::Failed, "Failed"},
}};

constexpr std::array<std::pair<FailureKind, std::string_view>, 8> kFailureNames{{
    {FailureKind::NoBlueprintMatch, "NoBlueprintMatch"},
    {FailureKind::InsufficientRobots, "InsufficientRobots"},
    {FailureKind::NoCapableRobot, "NoCapableRobot"},
    {FailureKind::PlanFeedbackTimeout, "PlanFeedbackTimeout"},
    {FailureKind::TaskFeedbackTimeout, "TaskFeedbackTimeout"},
    {FailureKind::TaskNegativeFeedback, "TaskNegativeFeedback"},
    {FailureKind::RobotUnavailable, "RobotUnavailable"},
    {FailureKind::DuplicateRequest, "DuplicateRequest"},
}};

constexpr std::array<std::pair<RobotState, std::string_view>, 3> kRobotStateNames{{
    {RobotState::Unregistered, "Unregistered"},
    {RobotState::Idle, "Idle"},
    {RobotState::Controlled, "Controlled"},
}};

template <class E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

template <class E, std::size_t N>
std::optional<E> value_of(const std::array<std::pair<E, std::string_view>, N>& table,
                          std::string_view name) {
  for (const auto& [v, n] : table) {
    if (n == name) return v;
  }
  return std::nullopt;
}

}  // namespace

bool is_legal_transition(RequestStatus from, RequestStatus to) {
  switch (from) {
    case RequestStatus::Queued:
      return to == RequestStatus::InProgress || to == RequestStatus::Failed;
    case RequestStatus::InProgress:
      return to == RequestStatus::Succeeded || to == RequestStatus::Failed;
    case RequestStatus::Succeeded:
    case RequestStatus::Failed:
      return false;
  }
  return false;
}

bool KnowledgeBase::is_registered(const RobotId& id) const {
  auto it = robots.find(id);
  return it != robots.end() && it->second.state != RobotState::Unregistered;
}

bool satisfies(const CapabilitySet& robot_caps, const TaskSpec& task) {
  return std::includes(robot_caps.begin(), robot_caps.end(), task.required.begin(),
                       task.required.end());
}

std::vector<std::string> validate_blueprint(const PlanBlueprint& bp,
                                            const CapabilitySet& universe) {
  std::vector<std::string> errors;
  if (bp.id.empty()) errors.emplace_back("empty blueprint id");
  if (bp.tasks.empty()) errors.emplace_back("empty task list");
  std::set<std::string> labels;
  for (const auto& task : bp.tasks) {
    if (task.label.empty()) errors.emplace_back("empty task label");
    if (!labels.insert(task.label).second) {
      errors.push_back("duplicate task label " + task.label);
    }
    if (task.required.empty()) {
      errors.push_back("task " + task.label + " requires no capability");
    }
    for (const auto& cap : task.required) {
      if (!universe.contains(cap)) errors.push_back("unknown capability " + cap);
    }
  }
  return errors;
}

std::string_view to_string(RequestStatus s) { return name_of(kStatusNames, s); }
std::string_view to_string(FailureKind k) { return name_of(kFailureNames, k); }
std::string_view to_string(RobotState s) { return name_of(kRobotStateNames, s); }

std::optional<RequestStatus> parse_request_status(std::string_view s) {
  return value_of(kStatusNames, s);
}
std::optional<FailureKind> parse_failure_kind(std::string_view s) {
  return value_of(kFailureNames, s);
}
std::optional<RobotState> parse_robot_state(std::string_view s) {
  return value_of(kRobotStateNames, s);
}

std::string describe(const FailureReason& r) {
  std::string out{to_string(r.kind)};
  if (!r.task.empty()) out += "(" + r.task + ")";
  return out;
}

std::string plan_id_for(std::string_view request_id) {
  if (request_id.size() > 2 && request_id.substr(0, 2) == "Rq") {
    return "P" + std::string(request_id.substr(2));
  }
  return "P:" + std::string(request_id);
}

}  // namespace mrsim
