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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mrsim/simulation.hpp"
#include "support/fixtures.hpp"

namespace mrsim {
namespace {

Scenario bundled_scenario() {
  auto loaded = load_scenario_file(fixture::scenario_dir() + "/paper-sec6.json");
  EXPECT_TRUE(loaded.ok()) << (loaded.errors.empty() ? "" : loaded.errors.front());
  return *loaded.scenario;
}

Json minimal_doc() {
  return Json::parse(R"({
    "name": "tiny", "master_seed": 1, "duration": 10,
    "capability_universe": ["C1"],
    "robots": [{"id": "A", "capabilities": ["C1"], "duration_range": [1, 2]},
               {"id": "B", "capabilities": ["C1"], "duration_range": [1, 2]}],
    "blueprints": [{"id": "P", "tasks": [{"label": "T1", "required": ["C1"]}]}],
    "workload": {"requests": [{"time": 0, "id": "Rq1", "blueprint_id": "P"}]}
  })");
}

std::vector<std::string> errors_for(Json doc) { return load_scenario(doc).errors; }

bool has_error(const std::vector<std::string>& errors, const std::string& text) {
  for (const auto& e : errors) {
    if (e.find(text) != std::string::npos) return true;
  }
  return false;
}

TEST(Scenario, BundledEvaluationScenarioLoads) {
  const Scenario sc = bundled_scenario();
  EXPECT_EQ(sc.duration, 30);
  EXPECT_EQ(sc.ticks(), 30);
  EXPECT_EQ(sc.robots.size(), 3u);
  EXPECT_TRUE(sc.churn.enabled);
  EXPECT_EQ(sc.churn.steps_per_tick, 1);
  ASSERT_TRUE(sc.workload.generator);
  EXPECT_EQ(sc.workload.generator->requests_per_tick, 1);
}

TEST(Scenario, MinimalDocumentUsesDefaults) {
  auto loaded = load_scenario(minimal_doc());
  ASSERT_TRUE(loaded.ok()) << loaded.errors.front();
  const Scenario& sc = *loaded.scenario;
  EXPECT_EQ(sc.units_per_tick, 1);
  EXPECT_EQ(sc.timeouts.plan_feedback, 20);
  EXPECT_EQ(sc.timeouts.task_feedback, 10);
  EXPECT_EQ(sc.policies.min_robots, 2u);
  EXPECT_EQ(sc.policies.deregistration, DeregistrationPolicy::Defer);
  EXPECT_FALSE(sc.churn.enabled);
}

TEST(Scenario, JsonRoundTrip) {
  const Scenario sc = bundled_scenario();
  const Json j = scenario_to_json(sc);
  auto again = load_scenario(j);
  ASSERT_TRUE(again.ok()) << again.errors.front();
  EXPECT_EQ(scenario_to_json(*again.scenario), j);
}

TEST(Scenario, Diagnostics) {
  Json doc = minimal_doc();
  doc["colour"] = "blue";
  EXPECT_TRUE(has_error(errors_for(doc), "colour: unknown field"));

  doc = minimal_doc();
  doc["_note"] = "ignored";
  EXPECT_TRUE(errors_for(doc).empty());

  doc = minimal_doc();
  doc["blueprints"][0]["tasks"][0]["required"] = {"C9"};
  EXPECT_TRUE(has_error(errors_for(doc), "unknown capability C9"));

  doc = minimal_doc();
  doc["robots"][1]["id"] = "A";
  EXPECT_TRUE(has_error(errors_for(doc), "duplicate robot A"));

  doc = minimal_doc();
  doc["robots"][0]["duration_range"] = {3, 1};
  EXPECT_TRUE(has_error(errors_for(doc), "robots[0]"));

  doc = minimal_doc();
  doc["workload"]["requests"][0]["time"] = 10;
  EXPECT_TRUE(has_error(errors_for(doc), "workload.requests[0].time: must lie in [0, duration)"));

  doc = minimal_doc();
  doc["workload"]["generator"] = {{"blueprint_pool", {"P"}}};
  EXPECT_TRUE(has_error(errors_for(doc), "exactly one of requests or generator"));

  doc = minimal_doc();
  doc["workload"] = {{"generator", {{"blueprint_pool", {"Nope"}}}}};
  EXPECT_TRUE(has_error(errors_for(doc), "unknown blueprint Nope"));

  doc = minimal_doc();
  doc["units_per_tick"] = 3;
  EXPECT_TRUE(has_error(errors_for(doc), "duration: must be a whole number of ticks"));

  doc = minimal_doc();
  doc["commands"] = Json::array({{{"time", 1}, {"command", {{"id", "c"}, {"kind", "StepClock"},
                                                             {"payload", {{"units", 1}}}}}}});
  EXPECT_TRUE(has_error(errors_for(doc), "clock commands cannot be scripted"));

  doc = minimal_doc();
  doc["robots"][0]["id"] = "planner";
  EXPECT_FALSE(errors_for(doc).empty());

  doc = minimal_doc();
  doc.erase("workload");
  EXPECT_TRUE(has_error(errors_for(doc), "workload: missing"));
}

TEST(Scenario, FileWithCommentsAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "mrsim_commented.json";
  {
    std::ofstream out(path);
    out << "// leading comment\n" << minimal_doc().dump(2) << "\n";
  }
  EXPECT_TRUE(load_scenario_file(path).ok());
  std::filesystem::remove(path);
  EXPECT_FALSE(load_scenario_file(path).ok());
}

TEST(Simulation, FreshSessionState) {
  Simulation sim(bundled_scenario());
  const Json s = sim.snapshot();
  EXPECT_EQ(s["clock"], 0);
  EXPECT_TRUE(s["queue"].empty());
  ASSERT_EQ(s["robots"].size(), 3u);
  EXPECT_EQ(s["robots"][0]["id"], "R1");
  EXPECT_EQ(s["robots"][0]["capabilities"], Json({"C1", "C2", "C3", "C4"}));
  EXPECT_EQ(s["robots"][1]["state"], "Unregistered");
  EXPECT_TRUE(s["latest_tick"].is_null());
}

TEST(Simulation, WorkedExampleThroughTheWholeStack) {
  Scenario sc = fixture::worked_example(1);
  sc.workload.requests = {fixture::request(0, "Rq2", "Pb2")};
  Simulation sim(sc);
  sim.advance_to(0);
  ASSERT_TRUE(sim.planner().last_plan());
  const Json plan = *sim.planner().last_plan();
  EXPECT_EQ(plan["plan_id"], "P2");
  EXPECT_EQ(plan["assignments"][0]["robot"], "R1");
  EXPECT_EQ(plan["assignments"][1]["robot"], "R1");
  EXPECT_EQ(plan["assignments"][2]["robot"], "R3");
  EXPECT_EQ(sim.snapshot()["execution"]["plan_id"], "P2");
}

TEST(Simulation, ReportInvariantsForBundledScenario) {
  const auto report = run(bundled_scenario());
  ASSERT_EQ(report.ticks.size(), 30u);
  ASSERT_EQ(report.robots.size(), 3u);
  for (const auto& row : report.robots) {
    EXPECT_EQ(row.ledger.overall(), 30) << row.id;
    EXPECT_LE(row.kpis.utilization, row.kpis.availability);
    EXPECT_LE(row.kpis.availability, 1.0);
  }
  EXPECT_EQ(report.robot_series.size(), 90u);
}

TEST(Simulation, SameSeedSameBytesOtherSeedOtherTrace) {
  const Scenario sc = bundled_scenario();
  const auto a = run(sc);
  const auto b = run(sc);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(report_to_json(a).dump(), report_to_json(b).dump());
  Scenario other = sc;
  other.master_seed = sc.master_seed + 1;
  EXPECT_NE(run(other).trace, a.trace);
}

TEST(Simulation, CommandsBecomeControlEvents) {
  Simulation sim(fixture::worked_example(1));
  sim.advance_to(3);
  Command c;
  c.kind = CommandKind::AddBlueprint;
  c.id = "cmd-1";
  c.blueprint = PlanBlueprint{"Pb7", {fixture::task("T1", {"C2"})}};
  const auto r = sim.apply(c);
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.applied_at, 3);
  ASSERT_FALSE(sim.engine().trace().empty());
  const auto& ev = sim.engine().trace().back();
  EXPECT_EQ(ev.target, "control");
  EXPECT_EQ(ev.fire_at, 3);
  EXPECT_EQ(ev.summary.find("cmd-1"), std::string::npos);
  EXPECT_TRUE(sim.kb().blueprints.contains("Pb7"));

  Command step;
  step.kind = CommandKind::StepClock;
  step.units = 1;
  EXPECT_FALSE(sim.apply(step).accepted);
}

TEST(Simulation, FeedFollowsTraceOrder) {
  Simulation sim(bundled_scenario());
  std::vector<FeedItem> items;
  sim.set_feed_observer([&](const FeedItem& f) { items.push_back(f); });
  sim.advance_to(5);
  std::vector<std::uint64_t> feed_seqs;
  for (const auto& f : items) {
    if (f.kind == "envelope") feed_seqs.push_back(f.body["trace_seq"].get<std::uint64_t>());
  }
  std::vector<std::uint64_t> trace_seqs;
  for (const auto& ev : sim.engine().trace()) {
    if (Json::parse(ev.summary).contains("performative")) trace_seqs.push_back(ev.seq);
  }
  EXPECT_EQ(feed_seqs, trace_seqs);
  ASSERT_FALSE(feed_seqs.empty());
}

TEST(Simulation, WritesReportFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "mrsim_report_test";
  std::filesystem::remove_all(dir);
  const auto report = run(bundled_scenario());
  write_report(report, dir, ReportFormat::Csv, true);
  for (const char* f : {"ticks.csv", "robots.csv", "robot_series.json", "summary.json", "trace.log"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "trace.log");
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), report.trace);
  write_report(report, dir, ReportFormat::Json, false);
  EXPECT_TRUE(std::filesystem::exists(dir / "ticks.json"));
  std::filesystem::remove_all(dir);
}

TEST(Simulation, SummaryTotalsReconcile) {
  const auto report = run(bundled_scenario());
  const Json s = report_summary(report);
  const auto& t = s["totals"];
  EXPECT_EQ(t["arrived"].get<int>(),
            t["succeeded"].get<int>() + t["failed"].get<int>() + t["unfinished"].get<int>());
  EXPECT_EQ(t["unfinished"].get<std::int64_t>(), report.ticks.back().unprocessed);
}

class FailureMatrix : public ::testing::TestWithParam<fixture::FailureCase> {};

TEST_P(FailureMatrix, SingleRequestFailsWithTheExpectedReason) {
  const auto report = run(GetParam().scenario);
  ASSERT_EQ(report.requests.size(), 1u);
  EXPECT_EQ(report.requests[0].status, RequestStatus::Failed);
  ASSERT_TRUE(report.requests[0].reason);
  EXPECT_EQ(report.requests[0].reason->kind, GetParam().kind);
  EXPECT_EQ(report_summary(report)["failures_by_reason"][std::string(to_string(GetParam().kind))], 1);
}

INSTANTIATE_TEST_SUITE_P(AllReasons, FailureMatrix, ::testing::ValuesIn(fixture::failure_matrix()),
                         [](const auto& info) { return std::string(to_string(info.param.kind)); });

}  // namespace
}  // namespace mrsim
