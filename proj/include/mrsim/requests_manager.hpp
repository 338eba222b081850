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

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/bus.hpp"
#include "mrsim/domain.hpp"
#include "mrsim/metrics.hpp"

namespace mrsim {

enum class BlueprintOp { Add, Modify, Delete };

/// FCFS request intake. At most one request has a plan in flight; the next
/// request is selected only after feedback or timeout for the current one.
class RequestsManager {
 public:
  RequestsManager(Bus& bus, KnowledgeBase& kb, CapabilitySet universe,
                  SimTime plan_feedback_timeout = 20);

  /// Bus entry point: SUBMIT_REQUEST, PLAN_FAIL, PLAN_EXEC_SUCCESS, PLAN_EXEC_FAIL.
  void on_envelope(const Envelope& env);

  /// Queues the request and starts processing if nothing is in flight.
  /// Returns false (and answers REQUEST_FAIL(DuplicateRequest)) for a reused id.
  bool on_request(Request rq);

  /// The blueprint named by the request under the current KB state.
  std::optional<PlanBlueprint> match_blueprint(const Request& rq) const;

  /// Applies a KB edit. Returns one message per problem; empty means applied.
  /// Delete only needs `bp.id`.
  std::vector<std::string> blueprint_crud(BlueprintOp op, const PlanBlueprint& bp);

  void on_plan_feedback(const std::string& conversation_id, std::optional<FailureReason> failure);

  void set_lifecycle_sink(std::function<void(const LifecycleRecord&)> sink) {
    lifecycle_sink_ = std::move(sink);
  }

  const std::map<std::string, Request>& requests() const { return requests_; }
  const std::deque<std::string>& queue() const { return queue_; }
  const std::optional<std::string>& in_flight() const { return in_flight_; }
  bool timer_armed() const { return feedback_timer_.valid(); }
  const std::vector<std::string>& stale_feedback() const { return stale_; }
  /// Accepted request ids in arrival order.
  const std::vector<std::string>& arrival_order() const { return arrival_order_; }
  /// Order in which requests were selected for processing.
  const std::vector<std::string>& start_order() const { return start_order_; }
  /// Blueprint snapshot dispatched for the in-flight request.
  const std::optional<PlanBlueprint>& dispatched() const { return dispatched_; }

 private:
  void start_next();
  void dispatch_to_planner(const PlanBlueprint& bp, const std::string& request_id);
  void on_timeout(const std::string& request_id);
  void finish(const std::string& request_id, std::optional<FailureReason> failure);
  void set_status(Request& rq, RequestStatus to);
  void emit(LifecycleRecord rec);

  Bus& bus_;
  KnowledgeBase& kb_;
  CapabilitySet universe_;
  SimTime timeout_;
  std::map<std::string, Request> requests_;
  std::deque<std::string> queue_;
  std::optional<std::string> in_flight_;
  std::optional<PlanBlueprint> dispatched_;
  EventHandle feedback_timer_;
  std::vector<std::string> stale_;
  std::vector<std::string> start_order_;
  std::vector<std::string> arrival_order_;
  std::function<void(const LifecycleRecord&)> lifecycle_sink_;
};

}  // namespace mrsim
