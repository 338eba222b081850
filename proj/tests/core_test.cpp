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

#include <set>
#include <stdexcept>

#include "mrsim/bus.hpp"
#include "mrsim/codec.hpp"
#include "mrsim/domain.hpp"
#include "mrsim/engine.hpp"
#include "support/fixtures.hpp"

namespace mrsim {
namespace {

// --- domain ---------------------------------------------------------------

TEST(Domain, Pb2IsValidOverFiveCapabilities) {
  EXPECT_TRUE(validate_blueprint(fixture::pb2(), fixture::universe5()).empty());
}

TEST(Domain, BlueprintValidationMessages) {
  const auto u = fixture::universe5();
  EXPECT_EQ(validate_blueprint(PlanBlueprint{"X", {}}, u), std::vector<std::string>{"empty task list"});
  EXPECT_EQ(validate_blueprint(PlanBlueprint{"", {fixture::task("T1", {"C1"})}}, u),
            std::vector<std::string>{"empty blueprint id"});
  EXPECT_EQ(validate_blueprint(PlanBlueprint{"X", {fixture::task("T1", {"C9"})}}, u),
            std::vector<std::string>{"unknown capability C9"});
  EXPECT_EQ(validate_blueprint(PlanBlueprint{"X", {fixture::task("T1", {})}}, u),
            std::vector<std::string>{"task T1 requires no capability"});
  const auto dup = validate_blueprint(
      PlanBlueprint{"X", {fixture::task("T1", {"C1"}), fixture::task("T1", {"C2"})}}, u);
  EXPECT_EQ(dup, std::vector<std::string>{"duplicate task label T1"});
}

TEST(Domain, SatisfiesIsSubsetTest) {
  EXPECT_TRUE(satisfies({"C1", "C2", "C3", "C4"}, fixture::task("T1", {"C1", "C3", "C4"})));
  EXPECT_FALSE(satisfies({"C2", "C5"}, fixture::task("T1", {"C1", "C3", "C4"})));
  EXPECT_TRUE(satisfies({"C2", "C5"}, fixture::task("T3", {"C2", "C5"})));
  EXPECT_FALSE(satisfies({}, fixture::task("T2", {"C2"})));
}

TEST(Domain, RequestTransitions) {
  using S = RequestStatus;
  EXPECT_TRUE(is_legal_transition(S::Queued, S::InProgress));
  EXPECT_TRUE(is_legal_transition(S::Queued, S::Failed));
  EXPECT_TRUE(is_legal_transition(S::InProgress, S::Succeeded));
  EXPECT_TRUE(is_legal_transition(S::InProgress, S::Failed));
  EXPECT_FALSE(is_legal_transition(S::Queued, S::Succeeded));
  EXPECT_FALSE(is_legal_transition(S::Succeeded, S::Failed));
  EXPECT_FALSE(is_legal_transition(S::Failed, S::InProgress));
  EXPECT_FALSE(is_legal_transition(S::InProgress, S::Queued));
}

TEST(Domain, EnumNamesRoundTrip) {
  for (auto k : {FailureKind::NoBlueprintMatch, FailureKind::InsufficientRobots,
                 FailureKind::NoCapableRobot, FailureKind::PlanFeedbackTimeout,
                 FailureKind::TaskFeedbackTimeout, FailureKind::TaskNegativeFeedback,
                 FailureKind::RobotUnavailable, FailureKind::DuplicateRequest}) {
    EXPECT_EQ(parse_failure_kind(to_string(k)), k);
  }
  for (auto s : {RobotState::Unregistered, RobotState::Idle, RobotState::Controlled}) {
    EXPECT_EQ(parse_robot_state(to_string(s)), s);
  }
  EXPECT_FALSE(parse_failure_kind("nope").has_value());
}

TEST(Domain, PlanIds) {
  EXPECT_EQ(plan_id_for("Rq2"), "P2");
  EXPECT_EQ(plan_id_for("order-7"), "P:order-7");
}

TEST(Domain, LedgerTotals) {
  RobotTimeLedger l{8, 9, 13};
  EXPECT_EQ(l.registered(), 17);
  EXPECT_EQ(l.overall(), 30);
}

// --- engine ---------------------------------------------------------------

TEST(Engine, SameTimeEventsFireInScheduleOrder) {
  Engine e(1);
  std::vector<int> order;
  e.schedule(5, "a", "x", [&] { order.push_back(1); });
  e.schedule(3, "b", "y", [&] { order.push_back(0); });
  e.schedule(5, "c", "z", [&] { order.push_back(2); });
  EXPECT_EQ(e.run_until(10), 3u);
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(e.now(), 10);
}

TEST(Engine, EventsScheduledWhileRunningAreDelivered) {
  Engine e(1);
  int fired = 0;
  e.schedule(1, "a", "", [&] {
    e.schedule(1, "b", "", [&] { ++fired; });
    e.schedule(4, "c", "", [&] { ++fired; });
  });
  e.run_until(3);
  EXPECT_EQ(fired, 1);
  e.run_until(4);
  EXPECT_EQ(fired, 2);
}

TEST(Engine, CancelRemovesPendingEvent) {
  Engine e(1);
  bool fired = false;
  auto h = e.schedule(2, "a", "", [&] { fired = true; });
  EXPECT_TRUE(e.cancel(h));
  EXPECT_FALSE(e.cancel(h));
  e.run_until(5);
  EXPECT_FALSE(fired);
  EXPECT_TRUE(e.trace().empty());
}

TEST(Engine, RejectsPastAndBackwardsAndReentrantRuns) {
  Engine e(1);
  e.run_until(5);
  EXPECT_THROW(e.schedule(4, "a", "", [] {}), std::invalid_argument);
  EXPECT_THROW(e.run_until(4), std::invalid_argument);
  e.schedule(6, "a", "", [&] { e.run_until(7); });
  EXPECT_THROW(e.run_until(6), std::logic_error);
  // The guard is released after the throw.
  EXPECT_NO_THROW(e.run_until(8));
}

TEST(Engine, TraceLineFormat) {
  Engine e(1);
  e.schedule(2, "planner", "{\"k\":1}", [] {});
  e.run_until(2);
  EXPECT_EQ(e.trace_text(), "2\t1\tplanner\t{\"k\":1}\n");
}

TEST(Engine, StreamsAreIndependentAndSeeded) {
  Engine a(42), b(42), c(43);
  std::vector<std::int64_t> xa, xb, xc;
  for (int i = 0; i < 20; ++i) {
    xa.push_back(a.draw(RngStreamId::Churn, 0, 1000));
    xb.push_back(b.draw(RngStreamId::Churn, 0, 1000));
    xc.push_back(c.draw(RngStreamId::Churn, 0, 1000));
  }
  EXPECT_EQ(xa, xb);
  EXPECT_NE(xa, xc);

  // Drawing on another stream does not disturb this one.
  Engine d(42);
  for (int i = 0; i < 50; ++i) d.draw(RngStreamId::Requests, 0, 9);
  std::vector<std::int64_t> xd;
  for (int i = 0; i < 20; ++i) xd.push_back(d.draw(RngStreamId::Churn, 0, 1000));
  EXPECT_EQ(xa, xd);
}

TEST(Engine, UniformIntStaysInRangeAndCoversIt) {
  RngStream rng(9, "test");
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.uniform_int(-2, 3);
    ASSERT_GE(v, -2);
    ASSERT_LE(v, 3);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_EQ(rng.uniform_int(4, 4), 4);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform_unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

// --- bus ------------------------------------------------------------------

Envelope submission(std::string to, std::string id) {
  Envelope env;
  env.performative = Performative::SUBMIT_REQUEST;
  env.sender = "requestor";
  env.receiver = std::move(to);
  env.conversation_id = id;
  env.content = RequestSubmission{id, "requestor", "Pb2", 0};
  return env;
}

TEST(Bus, DeliversInSendOrderAndStampsTime) {
  Engine e(1);
  Bus bus(e, 2);
  std::vector<std::string> got;
  std::vector<SimTime> at;
  bus.subscribe("rm", [&](const Envelope& env) {
    got.push_back(env.conversation_id);
    at.push_back(e.now());
    EXPECT_EQ(env.sent_at, 1);
  });
  e.run_until(1);
  bus.send(submission("rm", "a"));
  bus.send(submission("rm", "b"));
  e.run_until(2);
  EXPECT_TRUE(got.empty());
  e.run_until(3);
  EXPECT_EQ(got, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(at, (std::vector<SimTime>{3, 3}));
}

TEST(Bus, UnboundReceiverDeadLetters) {
  Engine e(1);
  Bus bus(e);
  bus.send(submission("nobody", "a"));
  e.run_until(0);
  ASSERT_EQ(bus.dead_letters().size(), 1u);
  EXPECT_EQ(bus.dead_letters()[0].envelope.conversation_id, "a");

  // Unsubscribed between send and delivery.
  bus.subscribe("rm", [](const Envelope&) { FAIL(); });
  bus.send(submission("rm", "b"));
  bus.unsubscribe("rm");
  e.run_until(0);
  EXPECT_EQ(bus.dead_letters().size(), 2u);
}

TEST(Bus, RejectsMismatchedContentAndDuplicateSubscription) {
  Engine e(1);
  Bus bus(e);
  Envelope env = submission("rm", "a");
  env.performative = Performative::TASK_DONE;
  EXPECT_THROW(bus.send(env), std::invalid_argument);
  bus.subscribe("rm", [](const Envelope&) {});
  EXPECT_THROW(bus.subscribe("rm", [](const Envelope&) {}), std::logic_error);
}

TEST(Bus, DeliveryIsAnEngineEventWithEnvelopeSummary) {
  Engine e(1);
  Bus bus(e);
  bus.subscribe("rm", [](const Envelope&) {});
  bus.send(submission("rm", "a"));
  e.run_until(0);
  ASSERT_EQ(e.trace().size(), 1u);
  EXPECT_EQ(e.trace()[0].target, "rm");
  Envelope back = Json::parse(e.trace()[0].summary).get<Envelope>();
  EXPECT_EQ(back.conversation_id, "a");
  EXPECT_EQ(back.performative, Performative::SUBMIT_REQUEST);
}

// --- codec ----------------------------------------------------------------

TEST(Codec, EnvelopeRoundTripsForEveryContentKind) {
  std::vector<Envelope> samples;
  auto make = [&](Performative p, Content c) {
    Envelope env;
    env.performative = p;
    env.sender = "s";
    env.receiver = "r";
    env.conversation_id = "Rq2";
    env.content = std::move(c);
    env.sent_at = 4;
    samples.push_back(env);
  };
  make(Performative::SUBMIT_REQUEST, RequestSubmission{"Rq2", "u", "Pb2", 3});
  make(Performative::BLUEPRINT_TO_PLANNER, BlueprintDispatch{"Rq2", fixture::pb2()});
  make(Performative::PLAN_VERIFIED,
       VerifiedPlan{"P2", "Rq2", {Assignment{fixture::task("T1", {"C1"}), "R1"}}});
  make(Performative::PLAN_FAIL,
       Failure{"Rq2", "", FailureReason{FailureKind::NoCapableRobot, "T1"}});
  make(Performative::TASK_ASSIGN, TaskAssignment{"P2", "Rq2", 1, fixture::task("T2", {"C2"}), "R1"});
  make(Performative::TASK_DONE, TaskFeedback{"P2", "Rq2", 1, "T2", "R1"});
  make(Performative::REQUEST_SUCCESS, Completion{"Rq2", "P2"});
  make(Performative::REGISTER, Registration{"R2", {"C2"}});
  for (const auto& env : samples) {
    const Json j = env;
    const Envelope back = j.get<Envelope>();
    EXPECT_EQ(Json(back), j);
  }
}

TEST(Codec, LedgerUsesShortKeys) {
  const Json j = RobotTimeLedger{8, 9, 13};
  EXPECT_EQ(j.dump(), R"({"T_c":8,"T_unc":9,"T_unr":13,"T_r":17,"T_ov":30})");
}

}  // namespace
}  // namespace mrsim
