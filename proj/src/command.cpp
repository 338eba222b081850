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

#include "mrsim/command.hpp"

#include <array>

namespace mrsim {

namespace {

constexpr std::array<std::pair<CommandKind, std::string_view>, 9> kNames{{
    {CommandKind::SubmitRequest, "SubmitRequest"},
    {CommandKind::AddBlueprint, "AddBlueprint"},
    {CommandKind::ModifyBlueprint, "ModifyBlueprint"},
    {CommandKind::DeleteBlueprint, "DeleteBlueprint"},
    {CommandKind::RegisterRobot, "RegisterRobot"},
    {CommandKind::DeregisterRobot, "DeregisterRobot"},
    {CommandKind::StepClock, "StepClock"},
    {CommandKind::RunClock, "RunClock"},
    {CommandKind::PauseClock, "PauseClock"},
}};

bool string_field(const Json& p, const char* name, std::string& out,
                  std::vector<std::string>& errors) {
  if (!p.contains(name) || !p.at(name).is_string() || p.at(name).get<std::string>().empty()) {
    errors.push_back(std::string("payload.") + name + ": expected a non-empty string");
    return false;
  }
  out = p.at(name).get<std::string>();
  return true;
}

}  // namespace

std::string_view to_string(CommandKind k) {
  for (const auto& [v, n] : kNames) {
    if (v == k) return n;
  }
  return "?";
}

std::optional<CommandKind> parse_command_kind(std::string_view s) {
  for (const auto& [v, n] : kNames) {
    if (n == s) return v;
  }
  return std::nullopt;
}

void to_json(Json& j, const Command& c) {
  Json p = Json::object();
  switch (c.kind) {
    case CommandKind::SubmitRequest:
      p["request_id"] = c.request_id;
      p["blueprint_id"] = c.blueprint_id;
      if (!c.requestor.empty()) p["requestor"] = c.requestor;
      break;
    case CommandKind::AddBlueprint:
    case CommandKind::ModifyBlueprint:
      p["blueprint"] = c.blueprint ? Json(*c.blueprint) : Json(nullptr);
      break;
    case CommandKind::DeleteBlueprint:
      p["blueprint_id"] = c.blueprint_id;
      break;
    case CommandKind::RegisterRobot:
      p["robot"] = c.robot;
      if (c.capabilities) p["capabilities"] = *c.capabilities;
      if (c.duration_range) {
        p["duration_range"] = Json::array({c.duration_range->first, c.duration_range->second});
      }
      if (c.fail_probability) p["fail_probability"] = *c.fail_probability;
      break;
    case CommandKind::DeregisterRobot:
      p["robot"] = c.robot;
      break;
    case CommandKind::StepClock:
      p["units"] = c.units;
      break;
    case CommandKind::RunClock:
      if (c.until) p["until"] = *c.until;
      break;
    case CommandKind::PauseClock:
      break;
  }
  j = Json{{"id", c.id}, {"kind", to_string(c.kind)}, {"payload", p}};
}

std::vector<std::string> parse_command(const Json& j, Command& out) {
  std::vector<std::string> errors;
  if (!j.is_object()) return {"command must be an object"};
  Command c;
  if (j.contains("id")) {
    if (!j.at("id").is_string()) return {"id: expected a string"};
    c.id = j.at("id").get<std::string>();
  }
  if (!j.contains("kind") || !j.at("kind").is_string()) return {"kind: expected a string"};
  auto kind = parse_command_kind(j.at("kind").get<std::string>());
  if (!kind) return {"kind: unknown command kind " + j.at("kind").get<std::string>()};
  c.kind = *kind;
  const Json p = j.value("payload", Json::object());
  if (!p.is_object()) return {"payload: expected an object"};

  try {
    switch (c.kind) {
      case CommandKind::SubmitRequest:
        string_field(p, "request_id", c.request_id, errors);
        string_field(p, "blueprint_id", c.blueprint_id, errors);
        if (p.contains("requestor")) string_field(p, "requestor", c.requestor, errors);
        break;
      case CommandKind::AddBlueprint:
      case CommandKind::ModifyBlueprint:
        if (!p.contains("blueprint")) {
          errors.emplace_back("payload.blueprint: missing");
        } else {
          c.blueprint = p.at("blueprint").get<PlanBlueprint>();
        }
        break;
      case CommandKind::DeleteBlueprint:
        string_field(p, "blueprint_id", c.blueprint_id, errors);
        break;
      case CommandKind::RegisterRobot:
        string_field(p, "robot", c.robot, errors);
        if (p.contains("capabilities")) c.capabilities = p.at("capabilities").get<CapabilitySet>();
        if (p.contains("duration_range")) {
          const auto& r = p.at("duration_range");
          if (!r.is_array() || r.size() != 2) {
            errors.emplace_back("payload.duration_range: expected [min, max]");
          } else {
            c.duration_range = {r.at(0).get<SimTime>(), r.at(1).get<SimTime>()};
          }
        }
        if (p.contains("fail_probability")) c.fail_probability = p.at("fail_probability").get<double>();
        break;
      case CommandKind::DeregisterRobot:
        string_field(p, "robot", c.robot, errors);
        break;
      case CommandKind::StepClock:
        c.units = p.value("units", SimTime{1});
        if (c.units < 0) errors.emplace_back("payload.units: must be non-negative");
        break;
      case CommandKind::RunClock:
        if (p.contains("until") && !p.at("until").is_null()) c.until = p.at("until").get<SimTime>();
        break;
      case CommandKind::PauseClock:
        break;
    }
  } catch (const std::exception& e) {
    errors.push_back(std::string("payload: ") + e.what());
  }
  if (errors.empty()) out = std::move(c);
  return errors;
}

void to_json(Json& j, const CommandResult& r) {
  j = Json{{"command_id", r.command_id},
           {"accepted", r.accepted},
           {"applied_at", r.applied_at}};
  if (r.accepted) {
    if (!r.detail.empty()) j["detail"] = r.detail;
  } else {
    j["reason"] = r.detail;
  }
}

}  // namespace mrsim
