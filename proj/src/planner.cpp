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

#include "mrsim/planner.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mrsim {

PlannerSnapshot PlannerSnapshot::of(const KnowledgeBase& kb) {
  PlannerSnapshot snap;
  for (const auto& [id, rec] : kb.robots) {
    if (rec.state == RobotState::Unregistered || rec.leaving) continue;
    snap.robots.push_back(SnapshotRobot{id, rec.capabilities, rec.history});
  }
  return snap;
}

std::vector<RobotId> eligible(const TaskSpec& task, const PlannerSnapshot& snap) {
  std::vector<RobotId> out;
  for (const auto& r : snap.robots) {
    if (satisfies(r.capabilities, task)) out.push_back(r.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RobotId select_robot(const std::vector<RobotId>& candidates, const LoadMap& tentative,
                     TieMarks& marks, RngStream& rng) {
  if (candidates.empty()) throw std::invalid_argument("no candidate robots");

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& id : candidates) best = std::min(best, tentative.at(id));
  std::vector<RobotId> tied;
  for (const auto& id : candidates) {
    if (tentative.at(id) == best) tied.push_back(id);
  }
  std::sort(tied.begin(), tied.end());
  if (tied.size() == 1) return tied.front();

  std::vector<RobotId> unmarked;
  for (const auto& id : tied) {
    if (!marks.contains(id)) unmarked.push_back(id);
  }
  if (unmarked.empty()) {
    for (const auto& id : tied) marks.erase(id);
    unmarked = tied;
  }
  const auto pick = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(unmarked.size()) - 1));
  RobotId chosen = unmarked[pick];
  marks.insert(chosen);

  const bool all_marked =
      std::all_of(tied.begin(), tied.end(), [&](const RobotId& id) { return marks.contains(id); });
  if (all_marked) {
    for (const auto& id : tied) {
      if (id != chosen) marks.erase(id);
    }
  }
  return chosen;
}

PlanOutcome plan(const PlanBlueprint& bp, const std::string& request_id,
                 const PlannerSnapshot& snap, std::size_t min_robots, TieMarks& marks,
                 RngStream& rng) {
  PlanOutcome out;
  if (snap.robots.size() < min_robots) {
    out.error = FailureReason{FailureKind::InsufficientRobots, {}};
    return out;
  }

  LoadMap tentative;
  for (const auto& r : snap.robots) tentative[r.id] = r.history;

  VerifiedPlan vp;
  vp.plan_id = plan_id_for(request_id);
  vp.request_id = request_id;
  for (const auto& task : bp.tasks) {
    const auto candidates = eligible(task, snap);
    if (candidates.empty()) {
      out.error = FailureReason{FailureKind::NoCapableRobot, task.label};
      return out;
    }
    LoadMap loads;
    for (const auto& id : candidates) loads[id] = tentative.at(id);
    RobotId chosen = select_robot(candidates, tentative, marks, rng);
    out.decisions.push_back(PlanningDecision{task.label, chosen, std::move(loads)});
    ++tentative[chosen];
    vp.assignments.push_back(Assignment{task, std::move(chosen)});
  }
  out.plan = std::move(vp);
  return out;
}

Planner::Planner(Bus& bus, const KnowledgeBase& kb, std::size_t min_robots)
    : bus_(bus), kb_(kb), min_robots_(min_robots) {}

void Planner::on_blueprint(const Envelope& env) {
  const auto* dispatch = std::get_if<BlueprintDispatch>(&env.content);
  if (env.performative != Performative::BLUEPRINT_TO_PLANNER || dispatch == nullptr) {
    bus_.dead_letter(env, "planner accepts BLUEPRINT_TO_PLANNER only");
    return;
  }
  const auto snap = PlannerSnapshot::of(kb_);
  PlanOutcome outcome = plan(dispatch->blueprint, dispatch->request_id, snap, min_robots_, marks_,
                             bus_.engine().stream(RngStreamId::PlannerTie));
  if (record_sink_) {
    record_sink_(PlanningRecord{dispatch->request_id, bus_.engine().now(), outcome});
  }

  Envelope reply;
  reply.sender = std::string(kPlanner);
  reply.conversation_id = env.conversation_id;
  if (outcome.ok()) {
    last_plan_ = *outcome.plan;
    reply.performative = Performative::PLAN_VERIFIED;
    reply.receiver = std::string(kRobotsManager);
    reply.content = std::move(*outcome.plan);
  } else {
    reply.performative = Performative::PLAN_FAIL;
    reply.receiver = std::string(kRequestsManager);
    reply.content = Failure{dispatch->request_id, {}, *outcome.error};
  }
  bus_.send(std::move(reply));
}

}  // namespace mrsim
