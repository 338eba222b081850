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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/bus.hpp"
#include "mrsim/domain.hpp"
#include "mrsim/metrics.hpp"

namespace mrsim {

/// What happens when a robot asks to leave while executing a task.
enum class DeregistrationPolicy {
  Defer,      // finish the task, then leave
  Immediate,  // leave now; the task is abandoned and never reported
};

std::string_view to_string(DeregistrationPolicy p);
std::optional<DeregistrationPolicy> parse_deregistration_policy(std::string_view s);

enum class RegistrationOutcome { Ok, Deferred, Rejected };

struct RegistrationResult {
  RegistrationOutcome outcome = RegistrationOutcome::Ok;
  std::string message;

  bool accepted() const { return outcome != RegistrationOutcome::Rejected; }
};

struct ExecutionContext {
  VerifiedPlan plan;
  std::size_t cursor = 0;
  EventHandle task_timer;
};

/// Owns the robot directory (state, capabilities, history, ledger) and runs
/// verified plans one task at a time.
class RobotsManager {
 public:
  RobotsManager(Bus& bus, KnowledgeBase& kb, SimTime task_feedback_timeout = 10,
                DeregistrationPolicy policy = DeregistrationPolicy::Defer);

  /// Bus entry point: PLAN_VERIFIED, TASK_DONE, TASK_FAIL, REGISTER, DEREGISTER.
  void on_envelope(const Envelope& env);

  /// Adds a directory entry in the Unregistered state. Used for robots that
  /// exist from t=0; throws std::logic_error for a known id.
  void add_robot(const RobotId& id, CapabilitySet capabilities, std::int64_t history);

  RegistrationResult register_robot(const RobotId& id, CapabilitySet capabilities);
  RegistrationResult deregister_robot(const RobotId& id);

  void on_verified_plan(const Envelope& env);
  void on_task_feedback(const Envelope& env);

  /// Robot-side status reports. started: Idle -> Controlled. released:
  /// Controlled -> Idle, or -> Unregistered when a deferred leave is pending.
  /// Both return false when the robot is not in the expected state.
  bool task_started(const RobotId& id, const std::string& task);
  bool task_released(const RobotId& id);

  void set_transition_sink(std::function<void(const TransitionRecord&)> sink) {
    transition_sink_ = std::move(sink);
  }
  void set_history_sink(std::function<void(const HistoryRecord&)> sink) {
    history_sink_ = std::move(sink);
  }
  /// Called when a robot joins or leaves. `abandoned` is true when it left
  /// while holding a task (immediate policy).
  void set_membership_observer(
      std::function<void(const RobotId&, bool registered, bool abandoned)> observer) {
    membership_observer_ = std::move(observer);
  }

  const std::optional<ExecutionContext>& context() const { return context_; }
  const std::vector<std::string>& stale_feedback() const { return stale_; }
  const std::vector<std::string>& rejected_registrations() const { return rejected_; }
  DeregistrationPolicy policy() const { return policy_; }

 private:
  void transition(RobotRecord& rec, RobotState to);
  void assign_current();
  void on_task_timeout(const std::string& plan_id, std::size_t index);
  void finish_plan(std::optional<FailureReason> failure);
  void reject_overlap(const Envelope& env, const VerifiedPlan& plan);

  Bus& bus_;
  KnowledgeBase& kb_;
  SimTime timeout_;
  DeregistrationPolicy policy_;
  std::optional<ExecutionContext> context_;
  std::vector<std::string> stale_;
  std::vector<std::string> rejected_;
  std::function<void(const TransitionRecord&)> transition_sink_;
  std::function<void(const HistoryRecord&)> history_sink_;
  std::function<void(const RobotId&, bool, bool)> membership_observer_;
};

}  // namespace mrsim
