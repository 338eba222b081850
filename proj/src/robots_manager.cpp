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

#include "mrsim/robots_manager.hpp"

#include <stdexcept>

#include "mrsim/codec.hpp"

namespace mrsim {

std::string_view to_string(DeregistrationPolicy p) {
  return p == DeregistrationPolicy::Defer ? "defer" : "immediate";
}

std::optional<DeregistrationPolicy> parse_deregistration_policy(std::string_view s) {
  if (s == "defer") return DeregistrationPolicy::Defer;
  if (s == "immediate") return DeregistrationPolicy::Immediate;
  return std::nullopt;
}

RobotsManager::RobotsManager(Bus& bus, KnowledgeBase& kb, SimTime task_feedback_timeout,
                             DeregistrationPolicy policy)
    : bus_(bus), kb_(kb), timeout_(task_feedback_timeout), policy_(policy) {}

void RobotsManager::on_envelope(const Envelope& env) {
  switch (env.performative) {
    case Performative::PLAN_VERIFIED:
      on_verified_plan(env);
      return;
    case Performative::TASK_DONE:
    case Performative::TASK_FAIL:
      on_task_feedback(env);
      return;
    case Performative::REGISTER: {
      const auto& reg = std::get<Registration>(env.content);
      auto result = register_robot(reg.robot, reg.capabilities);
      if (!result.accepted()) rejected_.push_back(reg.robot + ": " + result.message);
      return;
    }
    case Performative::DEREGISTER: {
      const auto& reg = std::get<Registration>(env.content);
      auto result = deregister_robot(reg.robot);
      if (!result.accepted()) rejected_.push_back(reg.robot + ": " + result.message);
      return;
    }
    default:
      bus_.dead_letter(env, "robots manager cannot handle this performative");
  }
}

void RobotsManager::add_robot(const RobotId& id, CapabilitySet capabilities,
                              std::int64_t history) {
  RobotRecord rec;
  rec.id = id;
  rec.capabilities = std::move(capabilities);
  rec.history = history;
  rec.state_since = bus_.engine().now();
  if (!kb_.robots.emplace(id, std::move(rec)).second) {
    throw std::logic_error("robot already known: " + id);
  }
}

RegistrationResult RobotsManager::register_robot(const RobotId& id, CapabilitySet capabilities) {
  auto it = kb_.robots.find(id);
  if (it == kb_.robots.end()) {
    add_robot(id, {}, 0);
    it = kb_.robots.find(id);
  }
  RobotRecord& rec = it->second;
  if (rec.leaving) {
    // Re-registering during a deferred departure keeps the robot.
    rec.leaving = false;
    return {RegistrationOutcome::Ok, "robot " + id + " stays registered"};
  }
  if (rec.state != RobotState::Unregistered) {
    return {RegistrationOutcome::Rejected, "robot " + id + " is already registered"};
  }
  rec.capabilities = std::move(capabilities);
  transition(rec, RobotState::Idle);
  return {};
}

RegistrationResult RobotsManager::deregister_robot(const RobotId& id) {
  auto it = kb_.robots.find(id);
  if (it == kb_.robots.end()) {
    return {RegistrationOutcome::Rejected, "unknown robot " + id};
  }
  RobotRecord& rec = it->second;
  switch (rec.state) {
    case RobotState::Unregistered:
      return {RegistrationOutcome::Rejected, "robot " + id + " is not registered"};
    case RobotState::Idle:
      transition(rec, RobotState::Unregistered);
      return {};
    case RobotState::Controlled:
      if (policy_ == DeregistrationPolicy::Defer) {
        rec.leaving = true;
        return {RegistrationOutcome::Deferred, "robot " + id + " leaves after its task"};
      }
      transition(rec, RobotState::Unregistered);
      return {};
  }
  return {RegistrationOutcome::Rejected, "unreachable"};
}

bool RobotsManager::task_started(const RobotId& id, const std::string& task) {
  auto it = kb_.robots.find(id);
  if (it == kb_.robots.end() || it->second.state != RobotState::Idle) return false;
  it->second.current_task = task;
  transition(it->second, RobotState::Controlled);
  return true;
}

bool RobotsManager::task_released(const RobotId& id) {
  auto it = kb_.robots.find(id);
  if (it == kb_.robots.end() || it->second.state != RobotState::Controlled) return false;
  RobotRecord& rec = it->second;
  transition(rec, rec.leaving ? RobotState::Unregistered : RobotState::Idle);
  return true;
}

void RobotsManager::transition(RobotRecord& rec, RobotState to) {
  const SimTime now = bus_.engine().now();
  const RobotState from = rec.state;
  accrue_state(rec.ledger, from, rec.state_since, now);
  rec.state = to;
  rec.state_since = now;
  const bool abandoned = from == RobotState::Controlled && to == RobotState::Unregistered &&
                         !rec.leaving;
  if (to != RobotState::Controlled) rec.current_task.reset();
  if (to == RobotState::Unregistered) rec.leaving = false;
  if (transition_sink_) transition_sink_(TransitionRecord{rec.id, from, to, now});
  if (membership_observer_) {
    if (from == RobotState::Unregistered) membership_observer_(rec.id, true, false);
    if (to == RobotState::Unregistered) membership_observer_(rec.id, false, abandoned);
  }
}

void RobotsManager::on_verified_plan(const Envelope& env) {
  const auto& plan = std::get<VerifiedPlan>(env.content);
  if (context_) {
    reject_overlap(env, plan);
    return;
  }
  context_ = ExecutionContext{plan, 0, {}};
  if (plan.assignments.empty()) {
    finish_plan(std::nullopt);
    return;
  }
  assign_current();
}

void RobotsManager::reject_overlap(const Envelope& env, const VerifiedPlan& plan) {
  Envelope reply;
  reply.performative = Performative::PLAN_EXEC_FAIL;
  reply.sender = std::string(kRobotsManager);
  reply.receiver = std::string(kRequestsManager);
  reply.conversation_id = env.conversation_id;
  reply.content =
      Failure{plan.request_id, plan.plan_id, FailureReason{FailureKind::RobotUnavailable, {}}};
  bus_.send(std::move(reply));
}

void RobotsManager::assign_current() {
  auto& ctx = *context_;
  const Assignment& a = ctx.plan.assignments[ctx.cursor];
  auto it = kb_.robots.find(a.robot);
  if (it == kb_.robots.end() || it->second.state != RobotState::Idle || it->second.leaving) {
    finish_plan(FailureReason{FailureKind::RobotUnavailable, {}});
    return;
  }

  Envelope env;
  env.performative = Performative::TASK_ASSIGN;
  env.sender = std::string(kRobotsManager);
  env.receiver = a.robot;
  env.conversation_id = ctx.plan.request_id;
  env.content = TaskAssignment{ctx.plan.plan_id, ctx.plan.request_id, ctx.cursor, a.task, a.robot};
  bus_.send(std::move(env));

  Engine& engine = bus_.engine();
  const std::string plan_id = ctx.plan.plan_id;
  const std::size_t index = ctx.cursor;
  Json summary{{"timer", "task_feedback"},
               {"conversation_id", ctx.plan.request_id},
               {"plan_id", plan_id},
               {"index", index}};
  ctx.task_timer = engine.schedule(engine.now() + timeout_, std::string(kRobotsManager),
                                   dump_compact(summary),
                                   [this, plan_id, index] { on_task_timeout(plan_id, index); });
}

void RobotsManager::on_task_feedback(const Envelope& env) {
  const auto& fb = std::get<TaskFeedback>(env.content);
  const bool done = env.performative == Performative::TASK_DONE;
  if (done) {
    auto it = kb_.robots.find(fb.robot);
    if (it != kb_.robots.end()) {
      ++it->second.history;
      if (history_sink_) {
        history_sink_(HistoryRecord{fb.robot, bus_.engine().now(), it->second.history});
      }
    }
  }

  const bool matches = context_ && context_->plan.plan_id == fb.plan_id &&
                       context_->cursor == fb.index &&
                       context_->plan.assignments[fb.index].robot == fb.robot;
  if (!matches) {
    stale_.push_back(fb.plan_id + "#" + std::to_string(fb.index));
    return;
  }
  bus_.engine().cancel(context_->task_timer);
  context_->task_timer = {};
  if (!done) {
    finish_plan(FailureReason{FailureKind::TaskNegativeFeedback, {}});
    return;
  }
  ++context_->cursor;
  if (context_->cursor == context_->plan.assignments.size()) {
    finish_plan(std::nullopt);
  } else {
    assign_current();
  }
}

void RobotsManager::on_task_timeout(const std::string& plan_id, std::size_t index) {
  if (!context_ || context_->plan.plan_id != plan_id || context_->cursor != index) return;
  context_->task_timer = {};
  finish_plan(FailureReason{FailureKind::TaskFeedbackTimeout, {}});
}

void RobotsManager::finish_plan(std::optional<FailureReason> failure) {
  const VerifiedPlan plan = std::move(context_->plan);
  context_.reset();
  Envelope env;
  env.sender = std::string(kRobotsManager);
  env.receiver = std::string(kRequestsManager);
  env.conversation_id = plan.request_id;
  if (failure) {
    env.performative = Performative::PLAN_EXEC_FAIL;
    env.content = Failure{plan.request_id, plan.plan_id, *failure};
  } else {
    env.performative = Performative::PLAN_EXEC_SUCCESS;
    env.content = Completion{plan.request_id, plan.plan_id};
  }
  bus_.send(std::move(env));
}

}  // namespace mrsim
