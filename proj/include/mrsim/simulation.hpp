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

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mrsim/bus.hpp"
#include "mrsim/command.hpp"
#include "mrsim/engine.hpp"
#include "mrsim/metrics.hpp"
#include "mrsim/planner.hpp"
#include "mrsim/requests_manager.hpp"
#include "mrsim/robot_agent.hpp"
#include "mrsim/robots_manager.hpp"
#include "mrsim/scenario.hpp"

namespace mrsim {

/// Notification received by a requestor.
struct Notification {
  std::string requestor;
  std::string request_id;
  Performative performative = Performative::REQUEST_SUCCESS;
  std::optional<FailureReason> reason;
  SimTime at = 0;
};

/// Something worth showing on the live event feed.
struct FeedItem {
  std::string kind;  // envelope, transition, dead_letter
  Json body;
};

/// One fully wired simulation: engine, bus, the three managers, the robot
/// agents and the requestors. Workload and churn for the whole scenario are
/// scheduled at construction; nothing runs until the clock is advanced.
class Simulation {
 public:
  explicit Simulation(const Scenario& scenario);

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Applies a state-changing command as an engine event at now(). Pending
  /// events at now() are delivered first, then the command, then everything it
  /// triggers at now(). Clock commands are rejected here.
  CommandResult apply(const Command& cmd);

  /// Delivers every event up to and including `t`.
  void advance_to(SimTime t);

  SimTime now() const { return engine_->now(); }
  /// Ticks that can no longer change: tick k once now() >= (k + 1) * units_per_tick.
  std::int64_t finalized_ticks() const;

  std::vector<TickSample> series(std::int64_t ticks) const;
  std::vector<RobotRow> robot_table(SimTime end) const;
  std::vector<RobotId> robot_ids() const;

  /// Point-in-time state document.
  Json snapshot() const;

  void set_feed_observer(std::function<void(const FeedItem&)> observer) {
    feed_observer_ = std::move(observer);
  }

  const Scenario& scenario() const { return scenario_; }
  Engine& engine() { return *engine_; }
  const Engine& engine() const { return *engine_; }
  Bus& bus() { return *bus_; }
  const Bus& bus() const { return *bus_; }
  KnowledgeBase& kb() { return kb_; }
  const KnowledgeBase& kb() const { return kb_; }
  RequestsManager& requests_manager() { return *requests_manager_; }
  const RequestsManager& requests_manager() const { return *requests_manager_; }
  Planner& planner() { return *planner_; }
  RobotsManager& robots_manager() { return *robots_manager_; }
  const RobotsManager& robots_manager() const { return *robots_manager_; }
  RobotAgent* agent(const RobotId& id);
  const MetricsLog& metrics_log() const { return log_; }
  const std::vector<Notification>& notifications() const { return notifications_; }
  const std::vector<PlanningRecord>& planning_records() const { return planning_; }

 private:
  void preschedule();
  void churn(std::int64_t tick, std::int64_t step);
  void submit(const std::string& requestor, const std::string& request_id,
              const std::string& blueprint_id);
  void ensure_requestor(const std::string& requestor);
  void bind_agent(const RobotId& id);
  CommandResult execute(const Command& cmd);
  void feed(std::string kind, Json body);

  Scenario scenario_;
  std::unique_ptr<Engine> engine_;
  std::unique_ptr<Bus> bus_;
  KnowledgeBase kb_;
  std::unique_ptr<RequestsManager> requests_manager_;
  std::unique_ptr<Planner> planner_;
  std::unique_ptr<RobotsManager> robots_manager_;
  std::map<RobotId, std::unique_ptr<RobotAgent>> agents_;
  MetricsLog log_;
  std::vector<Notification> notifications_;
  std::vector<PlanningRecord> planning_;
  std::function<void(const FeedItem&)> feed_observer_;
};

struct RunReport {
  std::string scenario_name;
  std::uint64_t master_seed = 0;
  SimTime duration = 0;
  SimTime units_per_tick = 1;
  std::string trace;
  std::vector<TickSample> ticks;
  std::vector<RobotRow> robots;
  std::vector<RobotTickSample> robot_series;
  std::vector<Request> requests;  // arrival order, final status
  std::vector<DeadLetter> dead_letters;
  MetricsLog log;
};

/// Runs the scenario over [0, duration): scripted commands are applied at
/// their times, the clock stops at duration - 1 and ledgers close at duration.
RunReport run(const Scenario& scenario);

/// Summary document: totals, failures by reason, per-request outcomes and
/// dead letters.
Json report_summary(const RunReport& report);
Json report_to_json(const RunReport& report);

enum class ReportFormat { Csv, Json };

/// Writes ticks.{csv,json}, robots.{csv,json}, robot_series.json,
/// summary.json and, when `with_trace`, trace.log into `dir`.
void write_report(const RunReport& report, const std::filesystem::path& dir, ReportFormat format,
                  bool with_trace);

}  // namespace mrsim
