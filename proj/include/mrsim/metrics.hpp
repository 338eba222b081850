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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/codec.hpp"
#include "mrsim/domain.hpp"

namespace mrsim {

// ---------------------------------------------------------------------------
// Records. Everything the metrics need arrives as one of these; every series
// and table below is a fold over them.

enum class LifecycleKind { Arrived, Started, Terminated };

struct LifecycleRecord {
  LifecycleKind kind = LifecycleKind::Arrived;
  std::string request_id;
  SimTime at = 0;
  // Terminated only.
  RequestStatus status = RequestStatus::Queued;
  std::optional<FailureReason> reason;
};

struct TransitionRecord {
  RobotId robot;
  RobotState from = RobotState::Unregistered;
  RobotState to = RobotState::Unregistered;
  SimTime at = 0;
};

struct HistoryRecord {
  RobotId robot;
  SimTime at = 0;
  std::int64_t history = 0;
};

struct MetricsLog {
  std::vector<LifecycleRecord> lifecycle;
  std::vector<TransitionRecord> transitions;
  std::vector<HistoryRecord> history;
  // Initial task history per robot, as of t=0.
  std::map<RobotId, std::int64_t> initial_history;
};

// ---------------------------------------------------------------------------
// Request measurements.

struct TickSample {
  std::int64_t tick = 0;
  std::int64_t arrived = 0;
  std::int64_t processed = 0;
  std::int64_t successful = 0;
  std::int64_t failed = 0;
  std::int64_t unprocessed = 0;
  std::optional<double> latency;
  std::optional<double> efficiency;

  friend bool operator==(const TickSample&, const TickSample&) = default;
};

struct Rates {
  std::optional<double> success;
  std::optional<double> failure;
};

/// Requests that reached a terminal status during the tick.
inline std::int64_t throughput(const TickSample& s) { return s.processed; }

/// Successes and failures over arrivals in the tick; null when nothing arrived.
Rates rates(const TickSample& s);

/// Cumulative successes over cumulative failures; null while there are no failures.
std::optional<double> efficiency(std::int64_t cumulative_success, std::int64_t cumulative_failed);

/// Time from arrival to the start of processing.
inline SimTime latency(SimTime arrival, SimTime start) { return start - arrival; }

/// Folds lifecycle records into `ticks` samples of `units_per_tick` units each.
/// Tick k covers [k * units_per_tick, (k + 1) * units_per_tick).
std::vector<TickSample> tick_series(const std::vector<LifecycleRecord>& log, std::int64_t ticks,
                                    SimTime units_per_tick);

// ---------------------------------------------------------------------------
// Robot measurements.

/// Adds [since, at) to the bucket of `from`.
void accrue_state(RobotTimeLedger& ledger, RobotState from, SimTime since, SimTime at);

struct RobotKpis {
  double availability = 0;
  double utilization = 0;
  std::optional<double> effectiveness;
};

/// (T_r / T_ov, T_c / T_ov, T_c / T_unc). Throws std::invalid_argument for
/// T_ov <= 0. Effectiveness is null when T_unc = 0.
RobotKpis robot_kpis(const RobotTimeLedger& ledger, SimTime overall);

/// Replays the transition log up to `end`. Every robot named in `robots` starts
/// Unregistered at t=0.
std::map<RobotId, RobotTimeLedger> fold_ledgers(const std::vector<TransitionRecord>& log,
                                                const std::vector<RobotId>& robots, SimTime end);

struct RobotRow {
  RobotId id;
  RobotTimeLedger ledger;
  RobotKpis kpis;
  std::int64_t history = 0;
};

std::vector<RobotRow> robot_table(const MetricsLog& log, const std::vector<RobotId>& robots,
                                  SimTime end);

/// Per-tick robot state and task history at the end of each tick.
struct RobotTickSample {
  std::int64_t tick = 0;
  RobotId robot;
  RobotState state = RobotState::Unregistered;
  std::int64_t history = 0;
};

std::vector<RobotTickSample> robot_series(const MetricsLog& log,
                                          const std::vector<RobotId>& robots,
                                          std::int64_t ticks, SimTime units_per_tick);

// ---------------------------------------------------------------------------
// Serialization.

void to_json(Json& j, const TickSample& s);
void from_json(const Json& j, TickSample& s);
void to_json(Json& j, const RobotRow& r);
void to_json(Json& j, const RobotTickSample& r);
void to_json(Json& j, const MetricsLog& log);
void from_json(const Json& j, MetricsLog& log);

/// Header plus one row per tick: tick, arrived, processed, successful, failed,
/// unprocessed, latency, efficiency. Null values are empty fields.
std::string tick_series_csv(const std::vector<TickSample>& series);
std::string robot_table_csv(const std::vector<RobotRow>& rows);

/// Shortest round-trip decimal rendering used in all exported numbers.
std::string format_number(double v);

}  // namespace mrsim
