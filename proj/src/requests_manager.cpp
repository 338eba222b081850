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

#include "mrsim/requests_manager.hpp"

#include <stdexcept>

#include "mrsim/codec.hpp"

namespace mrsim {

RequestsManager::RequestsManager(Bus& bus, KnowledgeBase& kb, CapabilitySet universe,
                                 SimTime plan_feedback_timeout)
    : bus_(bus), kb_(kb), universe_(std::move(universe)), timeout_(plan_feedback_timeout) {}

void RequestsManager::on_envelope(const Envelope& env) {
  switch (env.performative) {
    case Performative::SUBMIT_REQUEST: {
      const auto& sub = std::get<RequestSubmission>(env.content);
      Request rq;
      rq.id = sub.request_id;
      rq.requestor = sub.requestor.empty() ? env.sender : sub.requestor;
      rq.blueprint_id = sub.blueprint_id;
      rq.arrival_time = bus_.engine().now();
      on_request(std::move(rq));
      return;
    }
    case Performative::PLAN_EXEC_SUCCESS:
      on_plan_feedback(env.conversation_id, std::nullopt);
      return;
    case Performative::PLAN_FAIL:
    case Performative::PLAN_EXEC_FAIL:
      on_plan_feedback(env.conversation_id, std::get<Failure>(env.content).reason);
      return;
    default:
      bus_.dead_letter(env, "requests manager cannot handle this performative");
  }
}

bool RequestsManager::on_request(Request rq) {
  if (requests_.contains(rq.id)) {
    Envelope reject;
    reject.performative = Performative::REQUEST_FAIL;
    reject.sender = std::string(kRequestsManager);
    reject.receiver = rq.requestor;
    reject.conversation_id = rq.id;
    reject.content = Failure{rq.id, {}, FailureReason{FailureKind::DuplicateRequest, {}}};
    bus_.send(std::move(reject));
    return false;
  }
  rq.status = RequestStatus::Queued;
  emit(LifecycleRecord{LifecycleKind::Arrived, rq.id, rq.arrival_time, {}, {}});
  queue_.push_back(rq.id);
  arrival_order_.push_back(rq.id);
  requests_.emplace(rq.id, std::move(rq));
  if (!in_flight_) start_next();
  return true;
}

std::optional<PlanBlueprint> RequestsManager::match_blueprint(const Request& rq) const {
  auto it = kb_.blueprints.find(rq.blueprint_id);
  if (it == kb_.blueprints.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> RequestsManager::blueprint_crud(BlueprintOp op, const PlanBlueprint& bp) {
  const bool exists = kb_.blueprints.contains(bp.id);
  switch (op) {
    case BlueprintOp::Add:
      if (exists) return {"duplicate blueprint id " + bp.id};
      break;
    case BlueprintOp::Modify:
    case BlueprintOp::Delete:
      if (!exists) return {"unknown blueprint id " + bp.id};
      break;
  }
  if (op == BlueprintOp::Delete) {
    kb_.blueprints.erase(bp.id);
    return {};
  }
  auto errors = validate_blueprint(bp, universe_);
  if (!errors.empty()) return errors;
  kb_.blueprints[bp.id] = bp;
  return {};
}

void RequestsManager::start_next() {
  while (!in_flight_ && !queue_.empty()) {
    const std::string id = queue_.front();
    queue_.pop_front();
    Request& rq = requests_.at(id);
    const SimTime now = bus_.engine().now();
    start_order_.push_back(id);
    emit(LifecycleRecord{LifecycleKind::Started, id, now, {}, {}});

    auto bp = match_blueprint(rq);
    if (!bp) {
      finish(id, FailureReason{FailureKind::NoBlueprintMatch, {}});
      continue;
    }
    set_status(rq, RequestStatus::InProgress);
    in_flight_ = id;
    dispatch_to_planner(*bp, id);
  }
}

void RequestsManager::dispatch_to_planner(const PlanBlueprint& bp, const std::string& request_id) {
  dispatched_ = bp;
  Envelope env;
  env.performative = Performative::BLUEPRINT_TO_PLANNER;
  env.sender = std::string(kRequestsManager);
  env.receiver = std::string(kPlanner);
  env.conversation_id = request_id;
  env.content = BlueprintDispatch{request_id, bp};
  bus_.send(std::move(env));

  Engine& engine = bus_.engine();
  Json summary{{"timer", "plan_feedback"}, {"conversation_id", request_id}};
  feedback_timer_ = engine.schedule(engine.now() + timeout_, std::string(kRequestsManager),
                                    dump_compact(summary),
                                    [this, request_id] { on_timeout(request_id); });
}

void RequestsManager::on_timeout(const std::string& request_id) {
  feedback_timer_ = {};
  if (in_flight_ != request_id) return;
  finish(request_id, FailureReason{FailureKind::PlanFeedbackTimeout, {}});
  start_next();
}

void RequestsManager::on_plan_feedback(const std::string& conversation_id,
                                       std::optional<FailureReason> failure) {
  if (in_flight_ != conversation_id) {
    stale_.push_back(conversation_id);
    return;
  }
  bus_.engine().cancel(feedback_timer_);
  feedback_timer_ = {};
  finish(conversation_id, std::move(failure));
  start_next();
}

void RequestsManager::finish(const std::string& request_id, std::optional<FailureReason> failure) {
  Request& rq = requests_.at(request_id);
  set_status(rq, failure ? RequestStatus::Failed : RequestStatus::Succeeded);
  rq.reason = failure;
  if (in_flight_ == request_id) {
    in_flight_.reset();
    dispatched_.reset();
  }
  emit(LifecycleRecord{LifecycleKind::Terminated, request_id, bus_.engine().now(), rq.status,
                       failure});

  Envelope env;
  env.sender = std::string(kRequestsManager);
  env.receiver = rq.requestor;
  env.conversation_id = request_id;
  if (failure) {
    env.performative = Performative::REQUEST_FAIL;
    env.content = Failure{request_id, {}, *failure};
  } else {
    env.performative = Performative::REQUEST_SUCCESS;
    env.content = Completion{request_id, plan_id_for(request_id)};
  }
  bus_.send(std::move(env));
}

void RequestsManager::set_status(Request& rq, RequestStatus to) {
  if (!is_legal_transition(rq.status, to)) {
    throw std::logic_error("illegal request transition for " + rq.id);
  }
  rq.status = to;
}

void RequestsManager::emit(LifecycleRecord rec) {
  if (lifecycle_sink_) lifecycle_sink_(rec);
}

}  // namespace mrsim
