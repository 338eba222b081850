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

#include "mrsim/simulation.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace mrsim {

Simulation::Simulation(const Scenario& scenario) : scenario_(scenario) {
  engine_ = std::make_unique<Engine>(scenario_.master_seed);
  bus_ = std::make_unique<Bus>(*engine_, scenario_.bus_latency);
  for (const auto& bp : scenario_.blueprints) kb_.blueprints.emplace(bp.id, bp);

  requests_manager_ = std::make_unique<RequestsManager>(
      *bus_, kb_, scenario_.capability_universe, scenario_.timeouts.plan_feedback);
  planner_ = std::make_unique<Planner>(*bus_, kb_, scenario_.policies.min_robots);
  robots_manager_ = std::make_unique<RobotsManager>(
      *bus_, kb_, scenario_.timeouts.task_feedback, scenario_.policies.deregistration);

  requests_manager_->set_lifecycle_sink(
      [this](const LifecycleRecord& rec) { log_.lifecycle.push_back(rec); });
  planner_->set_record_sink([this](const PlanningRecord& rec) { planning_.push_back(rec); });
  robots_manager_->set_transition_sink([this](const TransitionRecord& t) {
    log_.transitions.push_back(t);
    feed("transition", Json{{"robot", t.robot},
                            {"from", to_string(t.from)},
                            {"to", to_string(t.to)},
                            {"at", t.at}});
  });
  robots_manager_->set_history_sink(
      [this](const HistoryRecord& h) { log_.history.push_back(h); });
  robots_manager_->set_membership_observer(
      [this](const RobotId& id, bool registered, bool abandoned) {
        if (registered) {
          bind_agent(id);
          return;
        }
        bus_->unsubscribe(id);
        if (abandoned) {
          if (auto* a = agent(id)) a->abandon();
        }
      });

  bus_->subscribe(std::string(kRequestsManager),
                  [this](const Envelope& env) { requests_manager_->on_envelope(env); });
  bus_->subscribe(std::string(kPlanner),
                  [this](const Envelope& env) { planner_->on_blueprint(env); });
  bus_->subscribe(std::string(kRobotsManager),
                  [this](const Envelope& env) { robots_manager_->on_envelope(env); });
  bus_->set_delivery_observer([this](const Envelope& env) {
    const auto& ev = engine_->trace().back();
    feed("envelope", Json{{"trace_seq", ev.seq}, {"fire_at", ev.fire_at}, {"envelope", env}});
  });
  bus_->set_dead_letter_observer([this](const DeadLetter& dl) {
    feed("dead_letter", Json{{"at", dl.at}, {"reason", dl.reason}, {"envelope", dl.envelope}});
  });

  ensure_requestor(scenario_.requestor);
  for (const auto& rq : scenario_.workload.requests) {
    if (!rq.requestor.empty()) ensure_requestor(rq.requestor);
  }

  for (const auto& spec : scenario_.robots) {
    agents_.emplace(spec.agent.id, std::make_unique<RobotAgent>(*bus_, *robots_manager_, spec.agent));
    robots_manager_->add_robot(spec.agent.id, spec.agent.capabilities, spec.history);
    log_.initial_history[spec.agent.id] = spec.history;
  }
  for (const auto& spec : scenario_.robots) {
    if (spec.registered) robots_manager_->register_robot(spec.agent.id, spec.agent.capabilities);
  }

  preschedule();
}

RobotAgent* Simulation::agent(const RobotId& id) {
  auto it = agents_.find(id);
  return it == agents_.end() ? nullptr : it->second.get();
}

void Simulation::bind_agent(const RobotId& id) {
  RobotAgent* a = agent(id);
  if (a == nullptr || bus_->is_bound(id)) return;
  bus_->subscribe(id, [a](const Envelope& env) { a->on_envelope(env); });
}

void Simulation::ensure_requestor(const std::string& requestor) {
  if (bus_->is_bound(requestor)) return;
  bus_->subscribe(requestor, [this, requestor](const Envelope& env) {
    Notification n;
    n.requestor = requestor;
    n.performative = env.performative;
    n.at = engine_->now();
    if (const auto* f = std::get_if<Failure>(&env.content)) {
      n.request_id = f->request_id;
      n.reason = f->reason;
    } else if (const auto* c = std::get_if<Completion>(&env.content)) {
      n.request_id = c->request_id;
    }
    notifications_.push_back(std::move(n));
  });
}

void Simulation::preschedule() {
  struct Entry {
    SimTime time;
    int rank;
    std::string target;
    Json summary;
    Engine::Action action;
  };
  std::vector<Entry> entries;

  const std::int64_t ticks = scenario_.ticks();
  const SimTime upt = scenario_.units_per_tick;
  if (scenario_.churn.enabled && scenario_.churn.steps_per_tick > 0) {
    for (std::int64_t k = 0; k < ticks; ++k) {
      entries.push_back({k * upt, 0, "churn", Json{{"churn", {{"tick", k}, {"step", 0}}}},
                         [this, k] { churn(k, 0); }});
    }
  }
  if (const auto& gen = scenario_.workload.generator) {
    std::int64_t counter = 0;
    RngStream& rng = engine_->stream(RngStreamId::Requests);
    const auto pool_size = static_cast<std::int64_t>(gen->blueprint_pool.size());
    for (std::int64_t k = 0; k < ticks; ++k) {
      for (std::int64_t i = 0; i < gen->requests_per_tick; ++i) {
        std::string id = gen->id_prefix + std::to_string(++counter);
        std::string bp = gen->blueprint_pool[static_cast<std::size_t>(rng.uniform_int(0, pool_size - 1))];
        std::string requestor = scenario_.requestor;
        Json summary{{"workload", "submit"}, {"request_id", id}, {"blueprint_id", bp}};
        entries.push_back({k * upt, 1, requestor, std::move(summary),
                           [this, requestor, id, bp] { submit(requestor, id, bp); }});
      }
    }
  }
  for (const auto& rq : scenario_.workload.requests) {
    std::string requestor = rq.requestor.empty() ? scenario_.requestor : rq.requestor;
    Json summary{{"workload", "submit"}, {"request_id", rq.id}, {"blueprint_id", rq.blueprint_id}};
    entries.push_back({rq.time, 1, requestor, std::move(summary),
                       [this, requestor, id = rq.id, bp = rq.blueprint_id] {
                         submit(requestor, id, bp);
                       }});
  }

  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.time, a.rank) < std::tie(b.time, b.rank);
  });
  for (auto& e : entries) {
    engine_->schedule(e.time, std::move(e.target), dump_compact(e.summary), std::move(e.action));
  }
}

void Simulation::churn(std::int64_t tick, std::int64_t step) {
  const ChurnDecision d = churn_step(kb_, engine_->stream(RngStreamId::Churn));
  if (d.leave) agents_.at(*d.leave)->send_deregister();
  if (d.join) agents_.at(*d.join)->send_register();
  if (step + 1 < scenario_.churn.steps_per_tick) {
    // Later steps run after this step's messages so they see the new directory.
    Json summary{{"churn", {{"tick", tick}, {"step", step + 1}}}};
    engine_->schedule(engine_->now() + bus_->latency(), "churn", dump_compact(summary),
                      [this, tick, step] { churn(tick, step + 1); });
  }
}

void Simulation::submit(const std::string& requestor, const std::string& request_id,
                        const std::string& blueprint_id) {
  Envelope env;
  env.performative = Performative::SUBMIT_REQUEST;
  env.sender = requestor;
  env.receiver = std::string(kRequestsManager);
  env.conversation_id = request_id;
  env.content = RequestSubmission{request_id, requestor, blueprint_id, engine_->now()};
  bus_->send(std::move(env));
}

CommandResult Simulation::apply(const Command& cmd) {
  CommandResult result;
  result.command_id = cmd.id;
  if (is_clock_command(cmd.kind)) {
    result.applied_at = now();
    result.detail = "clock commands are handled by the session";
    return result;
  }
  const SimTime at = now();
  engine_->run_until(at);
  Json summary = cmd;
  summary.erase("id");
  engine_->schedule(at, "control", dump_compact(Json{{"command", summary}}),
                    [this, &cmd, &result] { result = execute(cmd); });
  engine_->run_until(at);
  result.command_id = cmd.id;
  result.applied_at = at;
  return result;
}

CommandResult Simulation::execute(const Command& cmd) {
  CommandResult r;
  r.accepted = true;
  auto reject = [&r](std::string why) {
    r.accepted = false;
    r.detail = std::move(why);
  };
  auto join = [](const std::vector<std::string>& errors) {
    std::string out;
    for (const auto& e : errors) {
      if (!out.empty()) out += "; ";
      out += e;
    }
    return out;
  };

  switch (cmd.kind) {
    case CommandKind::SubmitRequest: {
      if (requests_manager_->requests().contains(cmd.request_id)) {
        reject("duplicate request id " + cmd.request_id);
        break;
      }
      const std::string requestor = cmd.requestor.empty() ? scenario_.requestor : cmd.requestor;
      ensure_requestor(requestor);
      submit(requestor, cmd.request_id, cmd.blueprint_id);
      break;
    }
    case CommandKind::AddBlueprint:
    case CommandKind::ModifyBlueprint: {
      const auto op = cmd.kind == CommandKind::AddBlueprint ? BlueprintOp::Add : BlueprintOp::Modify;
      auto errors = requests_manager_->blueprint_crud(op, cmd.blueprint.value_or(PlanBlueprint{}));
      if (!errors.empty()) reject(join(errors));
      break;
    }
    case CommandKind::DeleteBlueprint: {
      auto errors = requests_manager_->blueprint_crud(BlueprintOp::Delete, PlanBlueprint{cmd.blueprint_id, {}});
      if (!errors.empty()) reject(join(errors));
      break;
    }
    case CommandKind::RegisterRobot: {
      if (cmd.capabilities) {
        for (const auto& cap : *cmd.capabilities) {
          if (!scenario_.capability_universe.contains(cap)) {
            reject("unknown capability " + cap);
            return r;
          }
        }
      }
      RobotAgent* a = agent(cmd.robot);
      if (a == nullptr) {
        if (!cmd.capabilities || !cmd.duration_range) {
          reject("unknown robot " + cmd.robot + " (new robots need capabilities and duration_range)");
          break;
        }
        RobotAgentConfig cfg{cmd.robot, *cmd.capabilities, cmd.duration_range->first,
                             cmd.duration_range->second, cmd.fail_probability.value_or(0.0)};
        if (auto errors = validate_agent_config(cfg); !errors.empty()) {
          reject(join(errors));
          break;
        }
        if (bus_->is_bound(cmd.robot)) {
          reject("id " + cmd.robot + " is taken by another component");
          break;
        }
        agents_.emplace(cmd.robot, std::make_unique<RobotAgent>(*bus_, *robots_manager_, cfg));
        a = agent(cmd.robot);
        robots_manager_->add_robot(cmd.robot, cfg.capabilities, 0);
        log_.initial_history.emplace(cmd.robot, 0);
      } else if (cmd.capabilities && !kb_.is_registered(cmd.robot)) {
        a->set_capabilities(*cmd.capabilities);
      }
      auto res = robots_manager_->register_robot(cmd.robot, a->config().capabilities);
      if (!res.accepted()) reject(res.message);
      break;
    }
    case CommandKind::DeregisterRobot: {
      auto res = robots_manager_->deregister_robot(cmd.robot);
      if (!res.accepted()) {
        reject(res.message);
      } else if (res.outcome == RegistrationOutcome::Deferred) {
        r.detail = "deferred";
      }
      break;
    }
    default:
      reject("clock commands are handled by the session");
  }
  return r;
}

void Simulation::advance_to(SimTime t) { engine_->run_until(t); }

std::int64_t Simulation::finalized_ticks() const {
  return now() / scenario_.units_per_tick;
}

std::vector<TickSample> Simulation::series(std::int64_t ticks) const {
  return tick_series(log_.lifecycle, ticks, scenario_.units_per_tick);
}

std::vector<RobotId> Simulation::robot_ids() const {
  std::vector<RobotId> ids;
  for (const auto& [id, rec] : kb_.robots) ids.push_back(id);
  return ids;
}

std::vector<RobotRow> Simulation::robot_table(SimTime end) const {
  return mrsim::robot_table(log_, robot_ids(), end);
}

Json Simulation::snapshot() const {
  const SimTime t = now();
  Json requests = Json::array();
  for (const auto& id : requests_manager_->arrival_order()) {
    requests.push_back(requests_manager_->requests().at(id));
  }
  Json queue = Json::array();
  for (const auto& id : requests_manager_->queue()) queue.push_back(id);

  Json blueprints = Json::array();
  for (const auto& [id, bp] : kb_.blueprints) blueprints.push_back(bp);

  Json robots = Json::array();
  for (const auto& [id, rec] : kb_.robots) {
    RobotTimeLedger closed = rec.ledger;
    accrue_state(closed, rec.state, rec.state_since, t);
    robots.push_back(Json{{"id", id},
                          {"capabilities", rec.capabilities},
                          {"history", rec.history},
                          {"state", to_string(rec.state)},
                          {"current_task", rec.current_task ? Json(*rec.current_task) : Json(nullptr)},
                          {"leaving", rec.leaving},
                          {"ledger", closed}});
  }

  Json execution = nullptr;
  if (const auto& ctx = robots_manager_->context()) {
    execution = Json{{"plan_id", ctx->plan.plan_id},
                     {"request_id", ctx->plan.request_id},
                     {"cursor", ctx->cursor},
                     {"assignments", ctx->plan.assignments}};
  }
  const std::int64_t finalized = finalized_ticks();
  Json latest = nullptr;
  if (finalized > 0) latest = series(finalized).back();
  const auto& last_plan = planner_->last_plan();

  return Json{{"clock", t},
              {"units_per_tick", scenario_.units_per_tick},
              {"requests", requests},
              {"queue", queue},
              {"in_flight", requests_manager_->in_flight() ? Json(*requests_manager_->in_flight())
                                                           : Json(nullptr)},
              {"blueprints", blueprints},
              {"robots", robots},
              {"execution", execution},
              {"last_plan", last_plan ? Json(*last_plan) : Json(nullptr)},
              {"finalized_ticks", finalized},
              {"latest_tick", latest},
              {"dead_letters", bus_->dead_letters().size()}};
}

void Simulation::feed(std::string kind, Json body) {
  if (feed_observer_) feed_observer_(FeedItem{std::move(kind), std::move(body)});
}

RunReport run(const Scenario& scenario) {
  Simulation sim(scenario);
  for (const auto& sc : scenario.commands) {
    sim.advance_to(sc.time);
    sim.apply(sc.command);
  }
  sim.advance_to(scenario.duration - 1);

  RunReport report;
  report.scenario_name = scenario.name;
  report.master_seed = scenario.master_seed;
  report.duration = scenario.duration;
  report.units_per_tick = scenario.units_per_tick;
  report.trace = sim.engine().trace_text();
  report.ticks = sim.series(scenario.ticks());
  report.robots = sim.robot_table(scenario.duration);
  report.robot_series =
      robot_series(sim.metrics_log(), sim.robot_ids(), scenario.ticks(), scenario.units_per_tick);
  for (const auto& id : sim.requests_manager().arrival_order()) {
    report.requests.push_back(sim.requests_manager().requests().at(id));
  }
  report.dead_letters = sim.bus().dead_letters();
  report.log = sim.metrics_log();
  return report;
}

Json report_summary(const RunReport& report) {
  std::map<std::string, SimTime> started, ended;
  for (const auto& rec : report.log.lifecycle) {
    if (rec.kind == LifecycleKind::Started) started[rec.request_id] = rec.at;
    if (rec.kind == LifecycleKind::Terminated) ended[rec.request_id] = rec.at;
  }
  std::int64_t succeeded = 0, failed = 0, open = 0;
  Json by_reason = Json::object();
  Json requests = Json::array();
  for (const auto& rq : report.requests) {
    Json e = rq;
    e["start_time"] = started.contains(rq.id) ? Json(started[rq.id]) : Json(nullptr);
    e["end_time"] = ended.contains(rq.id) ? Json(ended[rq.id]) : Json(nullptr);
    requests.push_back(std::move(e));
    if (rq.status == RequestStatus::Succeeded) {
      ++succeeded;
    } else if (rq.status == RequestStatus::Failed) {
      ++failed;
      const std::string key{to_string(rq.reason->kind)};
      by_reason[key] = by_reason.value(key, 0) + 1;
    } else {
      ++open;
    }
  }
  Json dead = Json::array();
  for (const auto& dl : report.dead_letters) {
    dead.push_back(Json{{"at", dl.at}, {"reason", dl.reason}, {"envelope", dl.envelope}});
  }
  std::int64_t trace_events = std::count(report.trace.begin(), report.trace.end(), '\n');
  return Json{{"scenario", report.scenario_name},
              {"master_seed", report.master_seed},
              {"duration", report.duration},
              {"units_per_tick", report.units_per_tick},
              {"ticks", report.ticks.size()},
              {"totals",
               {{"arrived", report.requests.size()},
                {"succeeded", succeeded},
                {"failed", failed},
                {"unfinished", open}}},
              {"failures_by_reason", by_reason},
              {"requests", requests},
              {"dead_letters", dead},
              {"trace_events", trace_events}};
}

Json report_to_json(const RunReport& report) {
  return Json{{"summary", report_summary(report)},
              {"ticks", report.ticks},
              {"robots", report.robots},
              {"robot_series", report.robot_series},
              {"log", report.log}};
}

void write_report(const RunReport& report, const std::filesystem::path& dir, ReportFormat format,
                  bool with_trace) {
  std::filesystem::create_directories(dir);
  auto write = [&dir](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  };
  if (format == ReportFormat::Csv) {
    write("ticks.csv", tick_series_csv(report.ticks));
    write("robots.csv", robot_table_csv(report.robots));
  } else {
    write("ticks.json", Json(report.ticks).dump(2) + "\n");
    write("robots.json", Json(report.robots).dump(2) + "\n");
  }
  write("robot_series.json", Json(report.robot_series).dump(2) + "\n");
  write("summary.json", report_summary(report).dump(2) + "\n");
  write("log.json", Json(report.log).dump(2) + "\n");
  if (with_trace) write("trace.log", report.trace);
}

}  // namespace mrsim
