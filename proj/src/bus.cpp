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

#include "mrsim/bus.hpp"

#include <array>
#include <stdexcept>
#include <utility>

#include "mrsim/codec.hpp"

namespace mrsim {

namespace {

constexpr std::array<std::pair<Performative, std::string_view>, 13> kNames{{
    {Performative::SUBMIT_REQUEST, "SUBMIT_REQUEST"},
    {Performative::BLUEPRINT_TO_PLANNER, "BLUEPRINT_TO_PLANNER"},
    {Performative::PLAN_VERIFIED, "PLAN_VERIFIED"},
    {Performative::PLAN_FAIL, "PLAN_FAIL"},
    {Performative::TASK_ASSIGN, "TASK_ASSIGN"},
    {Performative::TASK_DONE, "TASK_DONE"},
    {Performative::TASK_FAIL, "TASK_FAIL"},
    {Performative::PLAN_EXEC_SUCCESS, "PLAN_EXEC_SUCCESS"},
    {Performative::PLAN_EXEC_FAIL, "PLAN_EXEC_FAIL"},
    {Performative::REQUEST_SUCCESS, "REQUEST_SUCCESS"},
    {Performative::REQUEST_FAIL, "REQUEST_FAIL"},
    {Performative::REGISTER, "REGISTER"},
    {Performative::DEREGISTER, "DEREGISTER"},
}};

}  // namespace

std::string_view to_string(Performative p) {
  for (const auto& [v, n] : kNames) {
    if (v == p) return n;
  }
  return "?";
}

std::optional<Performative> parse_performative(std::string_view s) {
  for (const auto& [v, n] : kNames) {
    if (n == s) return v;
  }
  return std::nullopt;
}

bool content_matches(Performative p, const Content& content) {
  switch (p) {
    case Performative::SUBMIT_REQUEST:
      return std::holds_alternative<RequestSubmission>(content);
    case Performative::BLUEPRINT_TO_PLANNER:
      return std::holds_alternative<BlueprintDispatch>(content);
    case Performative::PLAN_VERIFIED:
      return std::holds_alternative<VerifiedPlan>(content);
    case Performative::PLAN_FAIL:
    case Performative::PLAN_EXEC_FAIL:
    case Performative::REQUEST_FAIL:
      return std::holds_alternative<Failure>(content);
    case Performative::TASK_ASSIGN:
      return std::holds_alternative<TaskAssignment>(content);
    case Performative::TASK_DONE:
    case Performative::TASK_FAIL:
      return std::holds_alternative<TaskFeedback>(content);
    case Performative::PLAN_EXEC_SUCCESS:
    case Performative::REQUEST_SUCCESS:
      return std::holds_alternative<Completion>(content);
    case Performative::REGISTER:
    case Performative::DEREGISTER:
      return std::holds_alternative<Registration>(content);
  }
  return false;
}

void Bus::subscribe(const std::string& receiver, Handler handler) {
  if (!handlers_.emplace(receiver, std::move(handler)).second) {
    throw std::logic_error("receiver already bound: " + receiver);
  }
}

bool Bus::unsubscribe(const std::string& receiver) { return handlers_.erase(receiver) > 0; }

EventHandle Bus::send(Envelope env) {
  if (!content_matches(env.performative, env.content)) {
    throw std::invalid_argument("content does not match performative " +
                                std::string(to_string(env.performative)));
  }
  env.sent_at = engine_.now();
  if (!is_bound(env.receiver)) {
    dead_letter(env, "unknown receiver");
    return {};
  }
  std::string summary = dump_compact(Json(env));
  std::string target = env.receiver;
  return engine_.schedule(engine_.now() + latency_, std::move(target), std::move(summary),
                          [this, env = std::move(env)] { deliver(env); });
}

void Bus::deliver(const Envelope& env) {
  auto it = handlers_.find(env.receiver);
  if (it == handlers_.end()) {
    dead_letter(env, "receiver unbound before delivery");
    return;
  }
  if (delivery_observer_) delivery_observer_(env);
  // Copy: the handler may rebind receivers.
  Handler handler = it->second;
  handler(env);
}

void Bus::dead_letter(const Envelope& env, std::string reason) {
  dead_letters_.push_back(DeadLetter{env, engine_.now(), std::move(reason)});
  if (dead_letter_observer_) dead_letter_observer_(dead_letters_.back());
}

}  // namespace mrsim
