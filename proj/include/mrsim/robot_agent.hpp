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

#include <optional>
#include <string>
#include <vector>

#include "mrsim/bus.hpp"
#include "mrsim/domain.hpp"
#include "mrsim/robots_manager.hpp"

namespace mrsim {

struct RobotAgentConfig {
  RobotId id;
  CapabilitySet capabilities;
  SimTime min_duration = 1;
  SimTime max_duration = 1;
  double fail_probability = 0.0;
};

std::vector<std::string> validate_agent_config(const RobotAgentConfig& cfg);

/// A simulated robot: holds one task at a time for a sampled duration and
/// reports TASK_DONE or TASK_FAIL to the robots manager.
class RobotAgent {
 public:
  RobotAgent(Bus& bus, RobotsManager& manager, RobotAgentConfig config);

  /// Bus entry point; only TASK_ASSIGN is accepted.
  void on_envelope(const Envelope& env);
  void on_task_assign(const Envelope& env);

  /// Drops the task in hand without reporting it.
  void abandon();

  void send_register();
  void send_deregister();

  bool busy() const { return completion_.valid(); }
  const RobotAgentConfig& config() const { return config_; }
  void set_capabilities(CapabilitySet caps) { config_.capabilities = std::move(caps); }
  const std::vector<SimTime>& sampled_durations() const { return durations_; }

 private:
  void complete(const TaskAssignment& task);

  Bus& bus_;
  RobotsManager& manager_;
  RobotAgentConfig config_;
  EventHandle completion_;
  std::vector<SimTime> durations_;
};

struct ChurnDecision {
  std::optional<RobotId> leave;
  std::optional<RobotId> join;
};

/// One churn step over the directory: a uniformly drawn registered robot
/// leaves and a uniformly drawn unregistered robot joins. Both pools are taken
/// before either change, so a robot is never drawn for both. A robot whose
/// departure is deferred counts as unregistered here: drawing it to join
/// cancels the departure, which keeps the membership size constant.
ChurnDecision churn_step(const KnowledgeBase& kb, RngStream& rng);

}  // namespace mrsim
