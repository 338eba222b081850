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

#include <gtest/gtest.h>

#include <random>

#include "mrsim/metrics.hpp"
#include "support/oracles.hpp"

namespace mrsim {
namespace {

constexpr double kTableTolerance = 0.005;  // the published table rounds to 2 decimals

TEST(RobotKpis, PublishedRobotTwoColumn) {
  const auto k = robot_kpis(RobotTimeLedger{8, 9, 13}, 30);
  EXPECT_NEAR(k.availability, 0.57, kTableTolerance);
  EXPECT_NEAR(k.utilization, 0.27, kTableTolerance);
  ASSERT_TRUE(k.effectiveness);
  EXPECT_NEAR(*k.effectiveness, 0.89, kTableTolerance);
}

TEST(RobotKpis, PublishedRobotThreeColumn) {
  const auto k = robot_kpis(RobotTimeLedger{12, 10, 8}, 30);
  EXPECT_NEAR(k.availability, 0.73, kTableTolerance);
  EXPECT_NEAR(k.utilization, 0.40, kTableTolerance);
  EXPECT_NEAR(*k.effectiveness, 1.20, kTableTolerance);
}

TEST(RobotKpis, EdgeCases) {
  const auto never_idle = robot_kpis(RobotTimeLedger{30, 0, 0}, 30);
  EXPECT_FALSE(never_idle.effectiveness.has_value());
  EXPECT_DOUBLE_EQ(never_idle.availability, 1.0);
  EXPECT_THROW(robot_kpis(RobotTimeLedger{}, 0), std::invalid_argument);
}

TEST(Accrue, AddsIntervalToTheLeftState) {
  RobotTimeLedger l;
  accrue_state(l, RobotState::Idle, 3, 7);
  accrue_state(l, RobotState::Controlled, 7, 9);
  accrue_state(l, RobotState::Unregistered, 9, 9);
  EXPECT_EQ(l, (RobotTimeLedger{2, 4, 0}));
}

TEST(Efficiency, NullUntilFirstFailure) {
  EXPECT_FALSE(efficiency(5, 0).has_value());
  EXPECT_DOUBLE_EQ(*efficiency(3, 1), 3.0);
  EXPECT_DOUBLE_EQ(*efficiency(0, 4), 0.0);
}

TEST(Rates, NullWithoutArrivals) {
  TickSample s;
  EXPECT_FALSE(rates(s).success.has_value());
  s.arrived = 4;
  s.successful = 1;
  s.failed = 2;
  EXPECT_DOUBLE_EQ(*rates(s).success, 0.25);
  EXPECT_DOUBLE_EQ(*rates(s).failure, 0.5);
}

LifecycleRecord arrived(std::string id, SimTime t) {
  return {LifecycleKind::Arrived, std::move(id), t, {}, {}};
}
LifecycleRecord started(std::string id, SimTime t) {
  return {LifecycleKind::Started, std::move(id), t, {}, {}};
}
LifecycleRecord ended(std::string id, SimTime t, bool ok) {
  return {LifecycleKind::Terminated, std::move(id), t,
          ok ? RequestStatus::Succeeded : RequestStatus::Failed,
          ok ? std::nullopt : std::optional<FailureReason>(FailureReason{FailureKind::NoBlueprintMatch, {}})};
}

TEST(TickSeries, HandComputedThreeTicks) {
  // Two units per tick: tick 0 = [0,2), tick 1 = [2,4), tick 2 = [4,6).
  const std::vector<LifecycleRecord> log{
      arrived("a", 0), started("a", 0), arrived("b", 1), ended("a", 2, true),
      started("b", 2), arrived("c", 3), ended("b", 3, false), started("c", 5),
  };
  const auto s = tick_series(log, 3, 2);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], (TickSample{0, 2, 0, 0, 0, 2, 0.0, std::nullopt}));
  EXPECT_EQ(s[1], (TickSample{1, 1, 2, 1, 1, 1, 1.0, 1.0}));
  EXPECT_EQ(s[2], (TickSample{2, 0, 0, 0, 0, 1, 2.0, 1.0}));
}

TEST(TickSeries, RandomLogsSatisfyConservation) {
  std::mt19937_64 gen(5);
  for (int round = 0; round < 200; ++round) {
    std::vector<LifecycleRecord> log;
    SimTime t = 0;
    const int n = std::uniform_int_distribution<int>(0, 30)(gen);
    for (int i = 0; i < n; ++i) {
      t += std::uniform_int_distribution<int>(0, 2)(gen);
      const std::string id = "r" + std::to_string(i);
      log.push_back(arrived(id, t));
      if (std::uniform_int_distribution<int>(0, 4)(gen) > 0) {
        log.push_back(started(id, t));
        log.push_back(ended(id, t + std::uniform_int_distribution<int>(0, 3)(gen),
                            std::uniform_int_distribution<int>(0, 1)(gen) == 1));
      }
    }
    std::stable_sort(log.begin(), log.end(),
                     [](const auto& a, const auto& b) { return a.at < b.at; });
    const std::int64_t ticks = t / 3 + 3;
    const auto s = tick_series(log, ticks, 3);
    std::int64_t arrived_total = 0, processed_total = 0;
    for (const auto& x : s) {
      ASSERT_EQ(x.processed, x.successful + x.failed);
      ASSERT_GE(x.unprocessed, 0);
      arrived_total += x.arrived;
      processed_total += x.processed;
      ASSERT_EQ(x.unprocessed, arrived_total - processed_total);
    }
  }
}

TEST(Ledgers, FoldMatchesUnitWalkOnRandomLogs) {
  std::mt19937_64 gen(11);
  const std::vector<RobotId> robots{"A", "B", "C"};
  for (int round = 0; round < 200; ++round) {
    std::vector<TransitionRecord> log;
    std::map<RobotId, RobotState> state;
    for (const auto& r : robots) state[r] = RobotState::Unregistered;
    SimTime t = 0;
    for (int i = 0; i < 25; ++i) {
      t += std::uniform_int_distribution<int>(0, 2)(gen);
      const RobotId& r = robots[std::uniform_int_distribution<std::size_t>(0, 2)(gen)];
      RobotState to;
      switch (state[r]) {
        case RobotState::Unregistered: to = RobotState::Idle; break;
        case RobotState::Idle:
          to = std::uniform_int_distribution<int>(0, 1)(gen) ? RobotState::Controlled
                                                             : RobotState::Unregistered;
          break;
        case RobotState::Controlled:
          to = std::uniform_int_distribution<int>(0, 1)(gen) ? RobotState::Idle
                                                             : RobotState::Unregistered;
          break;
      }
      log.push_back({r, state[r], to, t});
      state[r] = to;
    }
    const SimTime end = t + 2;
    const auto folded = fold_ledgers(log, robots, end);
    for (const auto& r : robots) {
      const auto& l = folded.at(r);
      ASSERT_EQ(l, oracle::unit_walk_ledger(log, r, end)) << "round " << round << " robot " << r;
      ASSERT_EQ(l.overall(), end);
    }
  }
}

TEST(Ledgers, InconsistentLogIsRejected) {
  const std::vector<TransitionRecord> log{{"A", RobotState::Idle, RobotState::Controlled, 1}};
  EXPECT_THROW(fold_ledgers(log, {"A"}, 5), std::invalid_argument);
}

TEST(RobotTable, CarriesHistoryAndKpis) {
  MetricsLog log;
  log.initial_history = {{"R2", 4}};
  log.transitions = {{"R2", RobotState::Unregistered, RobotState::Idle, 0},
                     {"R2", RobotState::Idle, RobotState::Controlled, 9},
                     {"R2", RobotState::Controlled, RobotState::Idle, 17},
                     {"R2", RobotState::Idle, RobotState::Unregistered, 17}};
  log.history = {{"R2", 17, 5}};
  const auto rows = robot_table(log, {"R2"}, 30);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].ledger, (RobotTimeLedger{8, 9, 13}));
  EXPECT_EQ(rows[0].history, 5);
  EXPECT_NEAR(rows[0].kpis.utilization, 0.27, kTableTolerance);

  const auto series = robot_series(log, {"R2"}, 3, 10);
  ASSERT_EQ(series.size(), 3u);
  EXPECT_EQ(series[0].state, RobotState::Controlled);
  EXPECT_EQ(series[0].history, 4);
  EXPECT_EQ(series[1].state, RobotState::Unregistered);
  EXPECT_EQ(series[1].history, 5);
}

TEST(Export, CsvAndJson) {
  const std::vector<TickSample> s{{0, 1, 1, 0, 1, 0, 0.0, 0.0}, {1, 2, 0, 0, 0, 2, std::nullopt, 0.0}};
  EXPECT_EQ(tick_series_csv(s),
            "tick,arrived,processed,successful,failed,unprocessed,latency,efficiency\n"
            "0,1,1,0,1,0,0,0\n"
            "1,2,0,0,0,2,,0\n");
  EXPECT_EQ(format_number(0.1 + 0.2), "0.30000000000000004");
  EXPECT_EQ(format_number(2.0), "2");
  const Json j = s[1];
  EXPECT_TRUE(j["latency"].is_null());
  EXPECT_EQ(j.get<TickSample>(), s[1]);
}

TEST(Export, MetricsLogRoundTrip) {
  MetricsLog log;
  log.lifecycle = {arrived("a", 0), started("a", 0), ended("a", 3, false)};
  log.transitions = {{"R1", RobotState::Unregistered, RobotState::Idle, 0}};
  log.history = {{"R1", 2, 10}};
  log.initial_history = {{"R1", 9}};
  const Json j = log;
  const MetricsLog back = j.get<MetricsLog>();
  EXPECT_EQ(Json(back), j);
}

}  // namespace
}  // namespace mrsim
