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

#include "mrsim/codec.hpp"

#include <stdexcept>

namespace mrsim {

namespace {

template <class T>
T field(const Json& j, const char* name) {
  if (!j.contains(name)) throw std::invalid_argument(std::string("missing field ") + name);
  return j.at(name).get<T>();
}

Json content_to_json(const Content& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        Json j;
        if constexpr (std::is_same_v<T, RequestSubmission>) {
          j["request_id"] = v.request_id;
          j["requestor"] = v.requestor;
          j["blueprint_id"] = v.blueprint_id;
          j["arrival_time"] = v.arrival_time;
        } else if constexpr (std::is_same_v<T, BlueprintDispatch>) {
          j["request_id"] = v.request_id;
          j["blueprint"] = v.blueprint;
        } else if constexpr (std::is_same_v<T, VerifiedPlan>) {
          j = v;
        } else if constexpr (std::is_same_v<T, Failure>) {
          j["request_id"] = v.request_id;
          j["plan_id"] = v.plan_id;
          j["reason"] = v.reason;
        } else if constexpr (std::is_same_v<T, TaskAssignment>) {
          j["plan_id"] = v.plan_id;
          j["request_id"] = v.request_id;
          j["index"] = v.index;
          j["task"] = v.task;
          j["robot"] = v.robot;
        } else if constexpr (std::is_same_v<T, TaskFeedback>) {
          j["plan_id"] = v.plan_id;
          j["request_id"] = v.request_id;
          j["index"] = v.index;
          j["task"] = v.task;
          j["robot"] = v.robot;
        } else if constexpr (std::is_same_v<T, Completion>) {
          j["request_id"] = v.request_id;
          j["plan_id"] = v.plan_id;
        } else if constexpr (std::is_same_v<T, Registration>) {
          j["robot"] = v.robot;
          j["capabilities"] = v.capabilities;
        }
        return j;
      },
      c);
}

Content content_from_json(Performative p, const Json& j) {
  switch (p) {
    case Performative::SUBMIT_REQUEST:
      return RequestSubmission{field<std::string>(j, "request_id"),
                               field<std::string>(j, "requestor"),
                               field<std::string>(j, "blueprint_id"),
                               field<SimTime>(j, "arrival_time")};
    case Performative::BLUEPRINT_TO_PLANNER:
      return BlueprintDispatch{field<std::string>(j, "request_id"),
                               field<PlanBlueprint>(j, "blueprint")};
    case Performative::PLAN_VERIFIED:
      return j.get<VerifiedPlan>();
    case Performative::PLAN_FAIL:
    case Performative::PLAN_EXEC_FAIL:
    case Performative::REQUEST_FAIL:
      return Failure{field<std::string>(j, "request_id"), field<std::string>(j, "plan_id"),
                     field<FailureReason>(j, "reason")};
    case Performative::TASK_ASSIGN:
      return TaskAssignment{field<std::string>(j, "plan_id"), field<std::string>(j, "request_id"),
                            field<std::size_t>(j, "index"), field<TaskSpec>(j, "task"),
                            field<std::string>(j, "robot")};
    case Performative::TASK_DONE:
    case Performative::TASK_FAIL:
      return TaskFeedback{field<std::string>(j, "plan_id"), field<std::string>(j, "request_id"),
                          field<std::size_t>(j, "index"), field<std::string>(j, "task"),
                          field<std::string>(j, "robot")};
    case Performative::PLAN_EXEC_SUCCESS:
    case Performative::REQUEST_SUCCESS:
      return Completion{field<std::string>(j, "request_id"), field<std::string>(j, "plan_id")};
    case Performative::REGISTER:
    case Performative::DEREGISTER:
      return Registration{field<std::string>(j, "robot"), field<CapabilitySet>(j, "capabilities")};
  }
  throw std::invalid_argument("unknown performative");
}

}  // namespace

void to_json(Json& j, const TaskSpec& t) {
  j = Json{{"label", t.label}, {"required", t.required}};
}

void from_json(const Json& j, TaskSpec& t) {
  t.label = field<std::string>(j, "label");
  t.required = field<CapabilitySet>(j, "required");
}

void to_json(Json& j, const PlanBlueprint& bp) {
  j = Json{{"id", bp.id}, {"tasks", bp.tasks}};
}

void from_json(const Json& j, PlanBlueprint& bp) {
  bp.id = field<std::string>(j, "id");
  bp.tasks = field<std::vector<TaskSpec>>(j, "tasks");
}

void to_json(Json& j, const Assignment& a) { j = Json{{"task", a.task}, {"robot", a.robot}}; }

void from_json(const Json& j, Assignment& a) {
  a.task = field<TaskSpec>(j, "task");
  a.robot = field<std::string>(j, "robot");
}

void to_json(Json& j, const VerifiedPlan& p) {
  j = Json{{"plan_id", p.plan_id}, {"request_id", p.request_id}, {"assignments", p.assignments}};
}

void from_json(const Json& j, VerifiedPlan& p) {
  p.plan_id = field<std::string>(j, "plan_id");
  p.request_id = field<std::string>(j, "request_id");
  p.assignments = field<std::vector<Assignment>>(j, "assignments");
}

void to_json(Json& j, const FailureReason& r) {
  j = Json{{"kind", to_string(r.kind)}};
  if (!r.task.empty()) j["task"] = r.task;
}

void from_json(const Json& j, FailureReason& r) {
  auto kind = parse_failure_kind(field<std::string>(j, "kind"));
  if (!kind) throw std::invalid_argument("unknown failure kind");
  r.kind = *kind;
  r.task = j.value("task", std::string{});
}

void to_json(Json& j, const Request& r) {
  j = Json{{"id", r.id},
           {"requestor", r.requestor},
           {"blueprint_id", r.blueprint_id},
           {"arrival_time", r.arrival_time},
           {"status", to_string(r.status)}};
  j["reason"] = r.reason ? Json(*r.reason) : Json(nullptr);
}

void to_json(Json& j, const RobotTimeLedger& l) {
  j = Json{{"T_c", l.controlled},
           {"T_unc", l.uncontrolled},
           {"T_unr", l.unregistered},
           {"T_r", l.registered()},
           {"T_ov", l.overall()}};
}

void to_json(Json& j, const Envelope& env) {
  j = Json{{"performative", to_string(env.performative)},
           {"sender", env.sender},
           {"receiver", env.receiver},
           {"conversation_id", env.conversation_id},
           {"content", content_to_json(env.content)},
           {"sent_at", env.sent_at}};
}

void from_json(const Json& j, Envelope& env) {
  auto p = parse_performative(field<std::string>(j, "performative"));
  if (!p) throw std::invalid_argument("unknown performative");
  env.performative = *p;
  env.sender = field<std::string>(j, "sender");
  env.receiver = field<std::string>(j, "receiver");
  env.conversation_id = field<std::string>(j, "conversation_id");
  env.content = content_from_json(*p, j.at("content"));
  env.sent_at = field<SimTime>(j, "sent_at");
}

std::string dump_compact(const Json& j) { return j.dump(); }

}  // namespace mrsim
