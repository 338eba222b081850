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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mrsim/domain.hpp"
#include "mrsim/engine.hpp"

namespace mrsim {

enum class Performative {
  SUBMIT_REQUEST,
  BLUEPRINT_TO_PLANNER,
  PLAN_VERIFIED,
  PLAN_FAIL,
  TASK_ASSIGN,
  TASK_DONE,
  TASK_FAIL,
  PLAN_EXEC_SUCCESS,
  PLAN_EXEC_FAIL,
  REQUEST_SUCCESS,
  REQUEST_FAIL,
  REGISTER,
  DEREGISTER,
};

std::string_view to_string(Performative p);
std::optional<Performative> parse_performative(std::string_view s);

// Well-known component ids.
inline constexpr std::string_view kRequestsManager = "requests_manager";
inline constexpr std::string_view kPlanner = "planner";
inline constexpr std::string_view kRobotsManager = "robots_manager";

// Content shapes. Each performative carries exactly one of these.
struct RequestSubmission {
  std::string request_id;
  std::string requestor;
  std::string blueprint_id;
  SimTime arrival_time = 0;
};

struct BlueprintDispatch {
  std::string request_id;
  PlanBlueprint blueprint;
};

struct Failure {
  std::string request_id;
  std::string plan_id;  // empty before a plan exists
  FailureReason reason;
};

struct TaskAssignment {
  std::string plan_id;
  std::string request_id;
  std::size_t index = 0;
  TaskSpec task;
  RobotId robot;
};

struct TaskFeedback {
  std::string plan_id;
  std::string request_id;
  std::size_t index = 0;
  std::string task;
  RobotId robot;
};

struct Completion {
  std::string request_id;
  std::string plan_id;
};

struct Registration {
  RobotId robot;
  CapabilitySet capabilities;
};

using Content = std::variant<RequestSubmission, BlueprintDispatch, VerifiedPlan, Failure,
                             TaskAssignment, TaskFeedback, Completion, Registration>;

/// True when `content` holds the shape `p` requires.
bool content_matches(Performative p, const Content& content);

struct Envelope {
  Performative performative = Performative::SUBMIT_REQUEST;
  std::string sender;
  std::string receiver;
  std::string conversation_id;
  Content content;
  SimTime sent_at = 0;
};

struct DeadLetter {
  Envelope envelope;
  SimTime at = 0;
  std::string reason;
};

/// Ordered envelope delivery on top of the engine. Delivery happens as an
/// engine event at sent_at + latency; since latency is constant and equal-time
/// events fire in insertion order, each (sender, receiver) pair is FIFO.
class Bus {
 public:
  using Handler = std::function<void(const Envelope&)>;

  explicit Bus(Engine& engine, SimTime latency = 0) : engine_(engine), latency_(latency) {}

  /// Throws std::logic_error if the receiver is already bound.
  void subscribe(const std::string& receiver, Handler handler);
  bool unsubscribe(const std::string& receiver);
  bool is_bound(const std::string& receiver) const { return handlers_.contains(receiver); }

  /// Stamps sent_at with now() and schedules delivery. Unbound receivers
  /// (at send or at delivery time) produce a dead letter instead.
  /// Throws std::invalid_argument when the content does not fit the performative.
  EventHandle send(Envelope env);

  /// Records an envelope a handler refused.
  void dead_letter(const Envelope& env, std::string reason);

  /// Observes every envelope handed to a handler, before the handler runs.
  void set_delivery_observer(std::function<void(const Envelope&)> observer) {
    delivery_observer_ = std::move(observer);
  }
  void set_dead_letter_observer(std::function<void(const DeadLetter&)> observer) {
    dead_letter_observer_ = std::move(observer);
  }

  const std::vector<DeadLetter>& dead_letters() const { return dead_letters_; }
  SimTime latency() const { return latency_; }
  Engine& engine() { return engine_; }

 private:
  void deliver(const Envelope& env);

  Engine& engine_;
  SimTime latency_;
  std::map<std::string, Handler> handlers_;
  std::vector<DeadLetter> dead_letters_;
  std::function<void(const Envelope&)> delivery_observer_;
  std::function<void(const DeadLetter&)> dead_letter_observer_;
};

}  // namespace mrsim
