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

// Command-line front end: headless runs, scenario validation and the
// interactive HTTP session.

#include <csignal>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <httplib.h>

#include "mrsim/control.hpp"
#include "mrsim/scenario.hpp"
#include "mrsim/simulation.hpp"

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

std::optional<mrsim::Scenario> load(const std::string& path) {
  auto loaded = mrsim::load_scenario_file(path);
  for (const auto& e : loaded.errors) fmt::print(stderr, "{}: {}\n", path, e);
  return loaded.scenario;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot task allocation simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  bool trace = false;
  auto* run = app.add_subcommand("run", "Run a scenario headless and write the reports");
  run->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Override the scenario's master seed");
  run->add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--trace", trace, "Also write trace.log");

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);

  std::string host = "127.0.0.1";
  int port = 8080;
  double pace = 2.0;
  auto* serve = app.add_subcommand("serve", "Start an interactive session over HTTP");
  serve->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--pace", pace, "Simulated units per second while running")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  auto scenario = load(scenario_path);
  if (!scenario) return 2;

  if (*validate) {
    fmt::print("{}: ok ({} robots, {} blueprints, {} ticks)\n", scenario_path,
               scenario->robots.size(), scenario->blueprints.size(), scenario->ticks());
    return 0;
  }

  if (*run) {
    if (seed) scenario->master_seed = *seed;
    const auto report = mrsim::run(*scenario);
    mrsim::write_report(report, out_dir,
                        format == "json" ? mrsim::ReportFormat::Json : mrsim::ReportFormat::Csv,
                        trace);
    const auto summary = mrsim::report_summary(report);
    fmt::print("{}\n", summary["totals"].dump());
    return 0;
  }

  mrsim::ControlSession session(*scenario, mrsim::SessionOptions{pace});
  auto server = mrsim::make_http_server(session);
  g_server = server.get();
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  fmt::print("listening on http://{}:{}\n", host, port);
  std::fflush(stdout);
  if (!server->listen(host, port)) {
    fmt::print(stderr, "cannot listen on {}:{}\n", host, port);
    return 1;
  }
  session.stop();
  return 0;
}
