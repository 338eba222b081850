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

#include "mrsim/robot_agent.hpp"

#include "mrsim/codec.hpp"

namespace mrsim {

std::vector<std::string> validate_agent_config(const RobotAgentConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.id.empty()) errors.emplace_back("empty robot id");
  if (cfg.min_duration < 1) errors.push_back("robot " + cfg.id + ": duration minimum below 1");
  if (cfg.min_duration > cfg.max_duration) {
    errors.push_back("robot " + cfg.id + ": duration minimum above maximum");
  }
  if (!(cfg.fail_probability >= 0.0 && cfg.fail_probability <= 1.0)) {
    errors.push_back("robot " + cfg.id + ": fail_probability outside [0, 1]");
  }
  return errors;
}

RobotAgent::RobotAgent(Bus& bus, RobotsManager& manager, RobotAgentConfig config)
    : bus_(bus), manager_(manager), config_(std::move(config)) {}

void RobotAgent::on_envelope(const Envelope& env) {
  if (env.performative == Performative::TASK_ASSIGN) {
    on_task_assign(env);
  } else {
    bus_.dead_letter(env, "robot accepts TASK_ASSIGN only");
  }
}

void RobotAgent::on_task_assign(const Envelope& env) {
  const auto& task = std::get<TaskAssignment>(env.content);
  if (busy() || !manager_.task_started(config_.id, task.task.label)) {
    bus_.dead_letter(env, "robot " + config_.id + " is not idle");
    return;
  }
  Engine& engine = bus_.engine();
  const SimTime duration =
      engine.draw(RngStreamId::TaskDuration, config_.min_duration, config_.max_duration);
  durations_.push_back(duration);
  Json summary{{"timer", "task_complete"},
               {"robot", config_.id},
               {"plan_id", task.plan_id},
               {"index", task.index}};
  completion_ = engine.schedule(engine.now() + duration, config_.id, dump_compact(summary),
                                [this, task] { complete(task); });
}

void RobotAgent::complete(const TaskAssignment& task) {
  completion_ = {};
  const double u = bus_.engine().stream(RngStreamId::TaskDuration).uniform_unit();
  const bool failed = u < config_.fail_probability;

  Envelope env;
  env.performative = failed ? Performative::TASK_FAIL : Performative::TASK_DONE;
  env.sender = config_.id;
  env.receiver = std::string(kRobotsManager);
  env.conversation_id = task.request_id;
  env.content = TaskFeedback{task.plan_id, task.request_id, task.index, task.task.label, config_.id};
  bus_.send(std::move(env));
  manager_.task_released(config_.id);
}

void RobotAgent::abandon() {
  if (busy()) bus_.engine().cancel(completion_);
  completion_ = {};
}

void RobotAgent::send_register() {
  Envelope env;
  env.performative = Performative::REGISTER;
  env.sender = config_.id;
  env.receiver = std::string(kRobotsManager);
  env.conversation_id = config_.id;
  env.content = Registration{config_.id, config_.capabilities};
  bus_.send(std::move(env));
}

void RobotAgent::send_deregister() {
  Envelope env;
  env.performative = Performative::DEREGISTER;
  env.sender = config_.id;
  env.receiver = std::string(kRobotsManager);
  env.conversation_id = config_.id;
  env.content = Registration{config_.id, {}};
  bus_.send(std::move(env));
}

ChurnDecision churn_step(const KnowledgeBase& kb, RngStream& rng) {
  std::vector<RobotId> registered, unregistered;
  for (const auto& [id, rec] : kb.robots) {
    if (rec.state == RobotState::Unregistered || rec.leaving) {
      unregistered.push_back(id);
    } else if (!rec.leaving) {
      registered.push_back(id);
    }
  }
  ChurnDecision d;
  if (!registered.empty()) {
    d.leave = registered[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(registered.size()) - 1))];
  }
  if (!unregistered.empty()) {
    d.join = unregistered[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(unregistered.size()) - 1))];
  }
  return d;
}

}  // namespace mrsim
