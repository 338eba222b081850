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

#include "mrsim/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace mrsim {

namespace {

std::int64_t tick_of(SimTime at, SimTime units_per_tick) { return at / units_per_tick; }

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> read_optional(const Json& j, const char* name) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return j.at(name).get<double>();
}

std::string_view lifecycle_name(LifecycleKind k) {
  switch (k) {
    case LifecycleKind::Arrived:
      return "arrived";
    case LifecycleKind::Started:
      return "started";
    case LifecycleKind::Terminated:
      return "terminated";
  }
  return "?";
}

LifecycleKind parse_lifecycle(const std::string& s) {
  if (s == "arrived") return LifecycleKind::Arrived;
  if (s == "started") return LifecycleKind::Started;
  if (s == "terminated") return LifecycleKind::Terminated;
  throw std::invalid_argument("unknown lifecycle kind " + s);
}

RobotState robot_state_field(const Json& j, const char* name) {
  auto s = parse_robot_state(j.at(name).get<std::string>());
  if (!s) throw std::invalid_argument("unknown robot state");
  return *s;
}

}  // namespace

Rates rates(const TickSample& s) {
  if (s.arrived == 0) return {};
  const double arrived = static_cast<double>(s.arrived);
  return {static_cast<double>(s.successful) / arrived, static_cast<double>(s.failed) / arrived};
}

std::optional<double> efficiency(std::int64_t cumulative_success, std::int64_t cumulative_failed) {
  if (cumulative_failed == 0) return std::nullopt;
  return static_cast<double>(cumulative_success) / static_cast<double>(cumulative_failed);
}

std::vector<TickSample> tick_series(const std::vector<LifecycleRecord>& log, std::int64_t ticks,
                                    SimTime units_per_tick) {
  if (units_per_tick <= 0) throw std::invalid_argument("units_per_tick must be positive");
  std::vector<TickSample> series(static_cast<std::size_t>(std::max<std::int64_t>(ticks, 0)));
  std::vector<double> latency_sum(series.size(), 0.0);
  std::vector<std::int64_t> started(series.size(), 0);
  std::map<std::string, SimTime> arrival;

  for (std::size_t i = 0; i < series.size(); ++i) series[i].tick = static_cast<std::int64_t>(i);

  for (const auto& rec : log) {
    const std::int64_t tick = tick_of(rec.at, units_per_tick);
    const bool in_range = tick >= 0 && tick < ticks;
    switch (rec.kind) {
      case LifecycleKind::Arrived:
        arrival[rec.request_id] = rec.at;
        if (in_range) ++series[tick].arrived;
        break;
      case LifecycleKind::Started:
        if (in_range) {
          latency_sum[tick] += static_cast<double>(latency(arrival.at(rec.request_id), rec.at));
          ++started[tick];
        }
        break;
      case LifecycleKind::Terminated:
        if (!in_range) break;
        ++series[tick].processed;
        if (rec.status == RequestStatus::Succeeded) {
          ++series[tick].successful;
        } else {
          ++series[tick].failed;
        }
        break;
    }
  }

  std::int64_t cum_arrived = 0, cum_processed = 0, cum_success = 0, cum_failed = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    auto& s = series[i];
    cum_arrived += s.arrived;
    cum_processed += s.processed;
    cum_success += s.successful;
    cum_failed += s.failed;
    s.unprocessed = cum_arrived - cum_processed;
    if (started[i] > 0) s.latency = latency_sum[i] / static_cast<double>(started[i]);
    s.efficiency = efficiency(cum_success, cum_failed);
  }
  return series;
}

void accrue_state(RobotTimeLedger& ledger, RobotState from, SimTime since, SimTime at) {
  if (at < since) throw std::invalid_argument("transition before previous transition");
  const SimTime span = at - since;
  switch (from) {
    case RobotState::Controlled:
      ledger.controlled += span;
      break;
    case RobotState::Idle:
      ledger.uncontrolled += span;
      break;
    case RobotState::Unregistered:
      ledger.unregistered += span;
      break;
  }
}

RobotKpis robot_kpis(const RobotTimeLedger& ledger, SimTime overall) {
  if (overall <= 0) throw std::invalid_argument("overall time must be positive");
  const double ov = static_cast<double>(overall);
  RobotKpis k;
  k.availability = static_cast<double>(ledger.registered()) / ov;
  k.utilization = static_cast<double>(ledger.controlled) / ov;
  if (ledger.uncontrolled > 0) {
    k.effectiveness =
        static_cast<double>(ledger.controlled) / static_cast<double>(ledger.uncontrolled);
  }
  return k;
}

std::map<RobotId, RobotTimeLedger> fold_ledgers(const std::vector<TransitionRecord>& log,
                                                const std::vector<RobotId>& robots, SimTime end) {
  struct Cursor {
    RobotState state = RobotState::Unregistered;
    SimTime since = 0;
    RobotTimeLedger ledger;
  };
  std::map<RobotId, Cursor> cursors;
  for (const auto& id : robots) cursors[id];
  for (const auto& t : log) {
    if (t.at > end) break;
    auto& c = cursors[t.robot];
    if (c.state != t.from) {
      throw std::invalid_argument("inconsistent transition log for robot " + t.robot);
    }
    accrue_state(c.ledger, c.state, c.since, t.at);
    c.state = t.to;
    c.since = t.at;
  }
  std::map<RobotId, RobotTimeLedger> out;
  for (auto& [id, c] : cursors) {
    accrue_state(c.ledger, c.state, c.since, end);
    out.emplace(id, c.ledger);
  }
  return out;
}

std::vector<RobotRow> robot_table(const MetricsLog& log, const std::vector<RobotId>& robots,
                                  SimTime end) {
  std::map<RobotId, std::int64_t> history = log.initial_history;
  for (const auto& h : log.history) {
    if (h.at <= end) history[h.robot] = h.history;
  }
  std::vector<RobotRow> rows;
  for (const auto& [id, ledger] : fold_ledgers(log.transitions, robots, end)) {
    RobotRow row;
    row.id = id;
    row.ledger = ledger;
    row.kpis = robot_kpis(ledger, ledger.overall());
    row.history = history.contains(id) ? history[id] : 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RobotTickSample> robot_series(const MetricsLog& log,
                                          const std::vector<RobotId>& robots,
                                          std::int64_t ticks, SimTime units_per_tick) {
  std::map<RobotId, RobotState> state;
  std::map<RobotId, std::int64_t> history;
  for (const auto& id : robots) {
    state[id] = RobotState::Unregistered;
    auto it = log.initial_history.find(id);
    history[id] = it == log.initial_history.end() ? 0 : it->second;
  }
  std::vector<RobotTickSample> out;
  std::size_t ti = 0, hi = 0;
  for (std::int64_t tick = 0; tick < ticks; ++tick) {
    const SimTime tick_end = (tick + 1) * units_per_tick;
    while (ti < log.transitions.size() && log.transitions[ti].at < tick_end) {
      state[log.transitions[ti].robot] = log.transitions[ti].to;
      ++ti;
    }
    while (hi < log.history.size() && log.history[hi].at < tick_end) {
      history[log.history[hi].robot] = log.history[hi].history;
      ++hi;
    }
    for (const auto& [id, s] : state) out.push_back({tick, id, s, history[id]});
  }
  return out;
}

void to_json(Json& j, const TickSample& s) {
  j = Json{{"tick", s.tick},
           {"arrived", s.arrived},
           {"processed", s.processed},
           {"successful", s.successful},
           {"failed", s.failed},
           {"unprocessed", s.unprocessed},
           {"latency", optional_number(s.latency)},
           {"efficiency", optional_number(s.efficiency)}};
}

void from_json(const Json& j, TickSample& s) {
  s.tick = j.at("tick").get<std::int64_t>();
  s.arrived = j.at("arrived").get<std::int64_t>();
  s.processed = j.at("processed").get<std::int64_t>();
  s.successful = j.at("successful").get<std::int64_t>();
  s.failed = j.at("failed").get<std::int64_t>();
  s.unprocessed = j.at("unprocessed").get<std::int64_t>();
  s.latency = read_optional(j, "latency");
  s.efficiency = read_optional(j, "efficiency");
}

void to_json(Json& j, const RobotRow& r) {
  j = Json{{"id", r.id},
           {"ledger", r.ledger},
           {"availability", r.kpis.availability},
           {"utilization", r.kpis.utilization},
           {"effectiveness", optional_number(r.kpis.effectiveness)},
           {"history", r.history}};
}

void to_json(Json& j, const RobotTickSample& r) {
  j = Json{{"tick", r.tick},
           {"robot", r.robot},
           {"state", to_string(r.state)},
           {"history", r.history}};
}

void to_json(Json& j, const MetricsLog& log) {
  Json lifecycle = Json::array();
  for (const auto& r : log.lifecycle) {
    Json e{{"kind", lifecycle_name(r.kind)}, {"request_id", r.request_id}, {"at", r.at}};
    if (r.kind == LifecycleKind::Terminated) {
      e["status"] = to_string(r.status);
      e["reason"] = r.reason ? Json(*r.reason) : Json(nullptr);
    }
    lifecycle.push_back(std::move(e));
  }
  Json transitions = Json::array();
  for (const auto& t : log.transitions) {
    transitions.push_back(Json{{"robot", t.robot},
                               {"from", to_string(t.from)},
                               {"to", to_string(t.to)},
                               {"at", t.at}});
  }
  Json history = Json::array();
  for (const auto& h : log.history) {
    history.push_back(Json{{"robot", h.robot}, {"at", h.at}, {"history", h.history}});
  }
  j = Json{{"lifecycle", lifecycle},
           {"transitions", transitions},
           {"history", history},
           {"initial_history", log.initial_history}};
}

void from_json(const Json& j, MetricsLog& log) {
  log = {};
  for (const auto& e : j.at("lifecycle")) {
    LifecycleRecord r;
    r.kind = parse_lifecycle(e.at("kind").get<std::string>());
    r.request_id = e.at("request_id").get<std::string>();
    r.at = e.at("at").get<SimTime>();
    if (r.kind == LifecycleKind::Terminated) {
      auto status = parse_request_status(e.at("status").get<std::string>());
      if (!status) throw std::invalid_argument("unknown request status");
      r.status = *status;
      if (!e.at("reason").is_null()) r.reason = e.at("reason").get<FailureReason>();
    }
    log.lifecycle.push_back(std::move(r));
  }
  for (const auto& e : j.at("transitions")) {
    log.transitions.push_back(TransitionRecord{e.at("robot").get<std::string>(),
                                               robot_state_field(e, "from"),
                                               robot_state_field(e, "to"),
                                               e.at("at").get<SimTime>()});
  }
  for (const auto& e : j.at("history")) {
    log.history.push_back(HistoryRecord{e.at("robot").get<std::string>(), e.at("at").get<SimTime>(),
                                        e.at("history").get<std::int64_t>()});
  }
  log.initial_history = j.at("initial_history").get<std::map<RobotId, std::int64_t>>();
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string tick_series_csv(const std::vector<TickSample>& series) {
  std::string out = "tick,arrived,processed,successful,failed,unprocessed,latency,efficiency\n";
  for (const auto& s : series) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", s.tick, s.arrived, s.processed, s.successful,
                       s.failed, s.unprocessed, s.latency ? format_number(*s.latency) : "",
                       s.efficiency ? format_number(*s.efficiency) : "");
  }
  return out;
}

std::string robot_table_csv(const std::vector<RobotRow>& rows) {
  std::string out =
      "robot,T_c,T_unc,T_unr,T_r,T_ov,availability,utilization,effectiveness,history\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.id, r.ledger.controlled,
                       r.ledger.uncontrolled, r.ledger.unregistered, r.ledger.registered(),
                       r.ledger.overall(), format_number(r.kpis.availability),
                       format_number(r.kpis.utilization),
                       r.kpis.effectiveness ? format_number(*r.kpis.effectiveness) : "",
                       r.history);
  }
  return out;
}

}  // namespace mrsim
