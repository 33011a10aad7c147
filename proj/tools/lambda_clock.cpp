// Copyright 2026 The lambda-clock authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lambdaclock/scenario.hpp"

namespace {

int report_failures(const lambdaclock::ScenarioReport& report) {
  int failures = 0;
  for (const auto& check : report.checks) {
    if (!check.pass) {
      std::cerr << "FAIL " << report.scenario << "." << check.name
                << " (measured=" << lambdaclock::format_double(check.measured)
                << ", expected=" << lambdaclock::format_double(check.expected)
                << ", tolerance=" << lambdaclock::format_double(check.tolerance)
                << ")\n";
      ++failures;
    }
  }
  return failures;
}

int run_command(const std::string& config_path,
                const std::vector<std::string>& overrides,
                const std::string& out_path) {
  lambdaclock::ScenarioConfig cfg = lambdaclock::parse_scenario_config(
      lambdaclock::parse_json_text(lambdaclock::read_text_file(config_path),
                                   config_path));
  for (const auto& assignment : overrides) {
    lambdaclock::apply_override(cfg, assignment);
  }
  lambdaclock::apply_env_seed(cfg);
  if (!out_path.empty()) cfg.output.path = out_path;

  const lambdaclock::ScenarioReport report = lambdaclock::run_scenario(cfg);
  const std::string bytes = lambdaclock::emit_report(report, cfg.output.format);
  if (cfg.output.path.empty()) {
    std::cout << bytes;
  } else {
    lambdaclock::write_text_file(cfg.output.path, bytes);
  }
  return report_failures(report) == 0 ? 0 : 1;
}

int check_command() {
  int failures = 0;
  for (const auto& name : lambdaclock::scenario_names()) {
    lambdaclock::ScenarioConfig cfg;
    cfg.scenario = name;
    lambdaclock::apply_env_seed(cfg);
    const lambdaclock::ScenarioReport report = lambdaclock::run_scenario(cfg);
    failures += report_failures(report);
    std::cout << name << ": "
              << (report.all_pass() ? "ok" : "FAILED") << " ("
              << report.checks.size() << " checks)\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Informational-parameter clock toolkit"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one scenario from a JSON config");
  std::string config_path;
  run->add_option("--config", config_path, "Scenario config file (JSON)")
      ->required();
  std::vector<std::string> overrides;
  run->add_option("--set", overrides,
                  "Override a config entry (key=value); plain keys address "
                  "scenario params, dotted keys address numerics.*, "
                  "constants.*, output.*, and seed");
  std::string out_path;
  run->add_option("--out", out_path, "Write the report here instead of the "
                                     "config's output.path");

  auto* list =
      app.add_subcommand("list-scenarios", "List the built-in scenario names");
  auto* check = app.add_subcommand(
      "check", "Run every scenario with default parameters as a self-test");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& name : lambdaclock::scenario_names()) {
        std::cout << name << "\n";
      }
      return 0;
    }
    if (check->parsed()) return check_command();
    return run_command(config_path, overrides, out_path);
  } catch (const lambdaclock::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}
