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

#include "mrsim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mrsim {

namespace {

// Collects "path: message" diagnostics while walking a document.
class Reader {
 public:
  std::vector<std::string> errors;

  void error(const std::string& path, const std::string& msg) {
    errors.push_back(path + ": " + msg);
  }

  template <class T>
  bool get(const Json& obj, const std::string& path, const char* key, T& out, bool required) {
    if (!obj.contains(key)) {
      if (required) error(join(path, key), "missing");
      return false;
    }
    try {
      out = obj.at(key).get<T>();
      return true;
    } catch (const std::exception&) {
      error(join(path, key), "wrong type");
      return false;
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
  static std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
  }

  void check_keys(const Json& obj, const std::string& path, std::set<std::string> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const std::string& k = it.key();
      if (!k.empty() && k.front() == '_') continue;
      if (!allowed.contains(k)) error(join(path, k), "unknown field");
    }
  }
};

bool read_capability_set(Reader& r, const Json& obj, const std::string& path, const char* key,
                         CapabilitySet& out) {
  std::vector<std::string> list;
  if (!r.get(obj, path, key, list, true)) return false;
  for (const auto& c : list) {
    if (c.empty()) r.error(Reader::join(path, key), "empty capability id");
  }
  out = CapabilitySet(list.begin(), list.end());
  return true;
}

void read_robot(Reader& r, const Json& j, const std::string& path, RobotSpec& out) {
  if (!j.is_object()) {
    r.error(path, "expected an object");
    return;
  }
  r.check_keys(j, path,
               {"id", "capabilities", "duration_range", "fail_probability", "registered",
                "history"});
  r.get(j, path, "id", out.agent.id, true);
  read_capability_set(r, j, path, "capabilities", out.agent.capabilities);
  std::vector<SimTime> range;
  if (r.get(j, path, "duration_range", range, true)) {
    if (range.size() != 2) {
      r.error(Reader::join(path, "duration_range"), "expected [min, max]");
    } else {
      out.agent.min_duration = range[0];
      out.agent.max_duration = range[1];
    }
  }
  r.get(j, path, "fail_probability", out.agent.fail_probability, false);
  r.get(j, path, "registered", out.registered, false);
  r.get(j, path, "history", out.history, false);
}

void read_blueprint(Reader& r, const Json& j, const std::string& path, PlanBlueprint& out) {
  if (!j.is_object()) {
    r.error(path, "expected an object");
    return;
  }
  r.check_keys(j, path, {"id", "tasks"});
  r.get(j, path, "id", out.id, true);
  if (!j.contains("tasks") || !j.at("tasks").is_array()) {
    r.error(Reader::join(path, "tasks"), "expected an array");
    return;
  }
  const auto& tasks = j.at("tasks");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string tp = Reader::index(Reader::join(path, "tasks"), i);
    TaskSpec t;
    if (!tasks[i].is_object()) {
      r.error(tp, "expected an object");
      continue;
    }
    r.get(tasks[i], tp, "label", t.label, true);
    read_capability_set(r, tasks[i], tp, "required", t.required);
    out.tasks.push_back(std::move(t));
  }
}

void read_workload(Reader& r, const Json& j, const std::string& path, Workload& out) {
  if (!j.is_object()) {
    r.error(path, "expected an object");
    return;
  }
  r.check_keys(j, path, {"requests", "generator"});
  const bool has_requests = j.contains("requests");
  const bool has_generator = j.contains("generator");
  if (has_requests == has_generator) {
    r.error(path, "expected exactly one of requests or generator");
    return;
  }
  if (has_requests) {
    const auto& list = j.at("requests");
    if (!list.is_array()) {
      r.error(Reader::join(path, "requests"), "expected an array");
      return;
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string rp = Reader::index(Reader::join(path, "requests"), i);
      ScriptedRequest req;
      if (!list[i].is_object()) {
        r.error(rp, "expected an object");
        continue;
      }
      r.check_keys(list[i], rp, {"time", "id", "blueprint_id", "requestor"});
      r.get(list[i], rp, "time", req.time, true);
      r.get(list[i], rp, "id", req.id, true);
      r.get(list[i], rp, "blueprint_id", req.blueprint_id, true);
      r.get(list[i], rp, "requestor", req.requestor, false);
      out.requests.push_back(std::move(req));
    }
    return;
  }
  const auto& g = j.at("generator");
  const std::string gp = Reader::join(path, "generator");
  if (!g.is_object()) {
    r.error(gp, "expected an object");
    return;
  }
  r.check_keys(g, gp, {"requests_per_tick", "blueprint_pool", "id_prefix"});
  RequestGenerator gen;
  r.get(g, gp, "requests_per_tick", gen.requests_per_tick, false);
  r.get(g, gp, "blueprint_pool", gen.blueprint_pool, true);
  r.get(g, gp, "id_prefix", gen.id_prefix, false);
  out.generator = std::move(gen);
}

}  // namespace

ScenarioLoad load_scenario(const Json& doc) {
  Reader r;
  ScenarioLoad result;
  if (!doc.is_object()) {
    result.errors.emplace_back("document: expected an object");
    return result;
  }
  r.check_keys(doc, "",
               {"name", "master_seed", "duration", "units_per_tick", "bus_latency", "requestor",
                "capability_universe", "robots", "blueprints", "workload", "churn", "timeouts",
                "policies", "commands"});

  Scenario sc;
  r.get(doc, "", "name", sc.name, false);
  r.get(doc, "", "master_seed", sc.master_seed, true);
  r.get(doc, "", "duration", sc.duration, true);
  r.get(doc, "", "units_per_tick", sc.units_per_tick, false);
  r.get(doc, "", "bus_latency", sc.bus_latency, false);
  r.get(doc, "", "requestor", sc.requestor, false);
  read_capability_set(r, doc, "", "capability_universe", sc.capability_universe);

  if (doc.contains("robots") && doc.at("robots").is_array()) {
    const auto& list = doc.at("robots");
    for (std::size_t i = 0; i < list.size(); ++i) {
      RobotSpec spec;
      read_robot(r, list[i], Reader::index("robots", i), spec);
      sc.robots.push_back(std::move(spec));
    }
  } else {
    r.error("robots", "expected an array");
  }

  if (doc.contains("blueprints") && doc.at("blueprints").is_array()) {
    const auto& list = doc.at("blueprints");
    for (std::size_t i = 0; i < list.size(); ++i) {
      PlanBlueprint bp;
      read_blueprint(r, list[i], Reader::index("blueprints", i), bp);
      sc.blueprints.push_back(std::move(bp));
    }
  } else {
    r.error("blueprints", "expected an array");
  }

  if (doc.contains("workload")) {
    read_workload(r, doc.at("workload"), "workload", sc.workload);
  } else {
    r.error("workload", "missing");
  }

  if (doc.contains("churn")) {
    const auto& c = doc.at("churn");
    r.check_keys(c, "churn", {"enabled", "steps_per_tick"});
    r.get(c, "churn", "enabled", sc.churn.enabled, false);
    r.get(c, "churn", "steps_per_tick", sc.churn.steps_per_tick, false);
  }
  if (doc.contains("timeouts")) {
    const auto& t = doc.at("timeouts");
    r.check_keys(t, "timeouts", {"plan_feedback", "task_feedback"});
    r.get(t, "timeouts", "plan_feedback", sc.timeouts.plan_feedback, false);
    r.get(t, "timeouts", "task_feedback", sc.timeouts.task_feedback, false);
  }
  if (doc.contains("policies")) {
    const auto& p = doc.at("policies");
    r.check_keys(p, "policies", {"min_robots", "deregistration"});
    r.get(p, "policies", "min_robots", sc.policies.min_robots, false);
    std::string policy;
    if (r.get(p, "policies", "deregistration", policy, false)) {
      auto parsed = parse_deregistration_policy(policy);
      if (parsed) {
        sc.policies.deregistration = *parsed;
      } else {
        r.error("policies.deregistration", "expected defer or immediate");
      }
    }
  }
  if (doc.contains("commands")) {
    const auto& list = doc.at("commands");
    if (!list.is_array()) {
      r.error("commands", "expected an array");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string cp = Reader::index("commands", i);
        ScriptedCommand sc_cmd;
        if (!list[i].is_object()) {
          r.error(cp, "expected an object");
          continue;
        }
        r.get(list[i], cp, "time", sc_cmd.time, true);
        if (!list[i].contains("command")) {
          r.error(Reader::join(cp, "command"), "missing");
          continue;
        }
        for (const auto& e : parse_command(list[i].at("command"), sc_cmd.command)) {
          r.error(Reader::join(cp, "command"), e);
        }
        sc.commands.push_back(std::move(sc_cmd));
      }
    }
  }

  if (!r.errors.empty()) {
    result.errors = std::move(r.errors);
    return result;
  }
  result.errors = validate_scenario(sc);
  if (result.errors.empty()) result.scenario = std::move(sc);
  return result;
}

ScenarioLoad load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return ScenarioLoad{std::nullopt, {path.string() + ": cannot open"}};
  std::stringstream buf;
  buf << in.rdbuf();
  Json doc = Json::parse(buf.str(), nullptr, false, /*ignore_comments=*/true);
  if (doc.is_discarded()) return ScenarioLoad{std::nullopt, {path.string() + ": malformed JSON"}};
  return load_scenario(doc);
}

std::vector<std::string> validate_scenario(const Scenario& sc) {
  std::vector<std::string> errors;
  auto err = [&](const std::string& path, const std::string& msg) {
    errors.push_back(path + ": " + msg);
  };

  if (sc.duration <= 0) err("duration", "must be positive");
  if (sc.units_per_tick <= 0) {
    err("units_per_tick", "must be positive");
  } else if (sc.duration % sc.units_per_tick != 0) {
    err("duration", "must be a whole number of ticks");
  }
  if (sc.bus_latency < 0) err("bus_latency", "must be non-negative");
  if (sc.requestor.empty()) err("requestor", "must be non-empty");
  if (sc.timeouts.plan_feedback <= 0) err("timeouts.plan_feedback", "must be positive");
  if (sc.timeouts.task_feedback <= 0) err("timeouts.task_feedback", "must be positive");
  if (sc.churn.steps_per_tick < 0) err("churn.steps_per_tick", "must be non-negative");

  std::set<std::string> component_ids{"requests_manager", "planner", "robots_manager", "churn",
                                      "control", sc.requestor};
  std::set<RobotId> robot_ids;
  for (std::size_t i = 0; i < sc.robots.size(); ++i) {
    const auto& spec = sc.robots[i];
    const std::string path = "robots[" + std::to_string(i) + "]";
    if (!robot_ids.insert(spec.agent.id).second) err(path + ".id", "duplicate robot " + spec.agent.id);
    if (component_ids.contains(spec.agent.id)) {
      err(path + ".id", "clashes with component id " + spec.agent.id);
    }
    for (const auto& e : validate_agent_config(spec.agent)) err(path, e);
    for (const auto& cap : spec.agent.capabilities) {
      if (!sc.capability_universe.contains(cap)) err(path + ".capabilities", "unknown capability " + cap);
    }
    if (spec.history < 0) err(path + ".history", "must be non-negative");
  }

  std::set<std::string> blueprint_ids;
  for (std::size_t i = 0; i < sc.blueprints.size(); ++i) {
    const auto& bp = sc.blueprints[i];
    const std::string path = "blueprints[" + std::to_string(i) + "]";
    if (!blueprint_ids.insert(bp.id).second) err(path + ".id", "duplicate blueprint " + bp.id);
    for (const auto& e : validate_blueprint(bp, sc.capability_universe)) err(path, e);
  }

  std::set<std::string> request_ids;
  for (std::size_t i = 0; i < sc.workload.requests.size(); ++i) {
    const auto& rq = sc.workload.requests[i];
    const std::string path = "workload.requests[" + std::to_string(i) + "]";
    if (rq.time < 0 || rq.time >= sc.duration) err(path + ".time", "must lie in [0, duration)");
    if (rq.id.empty()) err(path + ".id", "must be non-empty");
    if (!request_ids.insert(rq.id).second) err(path + ".id", "duplicate request " + rq.id);
    // Requests may name a blueprint that does not exist: that is the no-match path.
  }
  if (sc.workload.generator) {
    const auto& g = *sc.workload.generator;
    if (g.requests_per_tick < 0) err("workload.generator.requests_per_tick", "must be non-negative");
    if (g.blueprint_pool.empty()) err("workload.generator.blueprint_pool", "must be non-empty");
    for (const auto& id : g.blueprint_pool) {
      if (!blueprint_ids.contains(id)) {
        err("workload.generator.blueprint_pool", "unknown blueprint " + id);
      }
    }
  }

  SimTime last = 0;
  for (std::size_t i = 0; i < sc.commands.size(); ++i) {
    const auto& c = sc.commands[i];
    const std::string path = "commands[" + std::to_string(i) + "]";
    if (c.time < 0 || c.time >= sc.duration) err(path + ".time", "must lie in [0, duration)");
    if (c.time < last) err(path + ".time", "commands must be in time order");
    last = c.time;
    if (is_clock_command(c.command.kind)) {
      err(path + ".command.kind", "clock commands cannot be scripted");
    }
  }
  return errors;
}

Json scenario_to_json(const Scenario& sc) {
  Json robots = Json::array();
  for (const auto& r : sc.robots) {
    robots.push_back(Json{{"id", r.agent.id},
                          {"capabilities", r.agent.capabilities},
                          {"duration_range", {r.agent.min_duration, r.agent.max_duration}},
                          {"fail_probability", r.agent.fail_probability},
                          {"registered", r.registered},
                          {"history", r.history}});
  }
  Json workload;
  if (sc.workload.generator) {
    workload["generator"] = Json{{"requests_per_tick", sc.workload.generator->requests_per_tick},
                                 {"blueprint_pool", sc.workload.generator->blueprint_pool},
                                 {"id_prefix", sc.workload.generator->id_prefix}};
  } else {
    Json list = Json::array();
    for (const auto& rq : sc.workload.requests) {
      Json e{{"time", rq.time}, {"id", rq.id}, {"blueprint_id", rq.blueprint_id}};
      if (!rq.requestor.empty()) e["requestor"] = rq.requestor;
      list.push_back(std::move(e));
    }
    workload["requests"] = std::move(list);
  }
  Json commands = Json::array();
  for (const auto& c : sc.commands) commands.push_back(Json{{"time", c.time}, {"command", c.command}});
  return Json{{"name", sc.name},
              {"master_seed", sc.master_seed},
              {"duration", sc.duration},
              {"units_per_tick", sc.units_per_tick},
              {"bus_latency", sc.bus_latency},
              {"requestor", sc.requestor},
              {"capability_universe", sc.capability_universe},
              {"robots", robots},
              {"blueprints", sc.blueprints},
              {"workload", workload},
              {"churn", {{"enabled", sc.churn.enabled}, {"steps_per_tick", sc.churn.steps_per_tick}}},
              {"timeouts",
               {{"plan_feedback", sc.timeouts.plan_feedback},
                {"task_feedback", sc.timeouts.task_feedback}}},
              {"policies",
               {{"min_robots", sc.policies.min_robots},
                {"deregistration", to_string(sc.policies.deregistration)}}},
              {"commands", commands}};
}

}  // namespace mrsim
