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
#include <string_view>
#include <utility>
#include <vector>

#include "mrsim/codec.hpp"
#include "mrsim/domain.hpp"

namespace mrsim {

enum class CommandKind {
  SubmitRequest,
  AddBlueprint,
  ModifyBlueprint,
  DeleteBlueprint,
  RegisterRobot,
  DeregisterRobot,
  StepClock,
  RunClock,
  PauseClock,
};

std::string_view to_string(CommandKind k);
std::optional<CommandKind> parse_command_kind(std::string_view s);

/// Clock commands steer the session; every other kind changes simulation state
/// and can also be scripted in a scenario.
inline bool is_clock_command(CommandKind k) {
  return k == CommandKind::StepClock || k == CommandKind::RunClock ||
         k == CommandKind::PauseClock;
}

/// A steering command. Only the fields of its kind are meaningful.
struct Command {
  CommandKind kind = CommandKind::PauseClock;
  std::string id;

  // SubmitRequest
  std::string request_id;
  std::string requestor;
  // SubmitRequest, DeleteBlueprint
  std::string blueprint_id;
  // AddBlueprint, ModifyBlueprint
  std::optional<PlanBlueprint> blueprint;
  // RegisterRobot, DeregisterRobot
  RobotId robot;
  std::optional<CapabilitySet> capabilities;
  std::optional<std::pair<SimTime, SimTime>> duration_range;
  std::optional<double> fail_probability;
  // StepClock
  SimTime units = 0;
  // RunClock; absent means free-run
  std::optional<SimTime> until;
};

/// {"id", "kind", "payload"} with payload fields per kind.
void to_json(Json& j, const Command& c);

/// Parses a command document. Returns the problems found; empty means `out`
/// holds the command.
std::vector<std::string> parse_command(const Json& j, Command& out);

struct CommandResult {
  bool accepted = false;
  std::string command_id;
  SimTime applied_at = 0;
  std::string detail;
};

void to_json(Json& j, const CommandResult& r);

}  // namespace mrsim
