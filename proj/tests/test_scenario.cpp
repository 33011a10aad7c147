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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <string>

#include "lambdaclock/scenario.hpp"

using namespace lambdaclock;

namespace {

ScenarioConfig config_for(const std::string& name) {
  return parse_scenario_config(
      nlohmann::json::parse(R"({"scenario": ")" + name + R"("})"));
}

double summary_value(const ScenarioReport& report, const std::string& name) {
  for (const auto& [key, value] : report.summary) {
    if (key == name) return value;
  }
  FAIL("missing summary entry " + name);
  return 0.0;
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const ScenarioConfig cfg = config_for("decay");
  CHECK(cfg.scenario == "decay");
  CHECK(cfg.seed == 0);
  CHECK(cfg.output.format == "csv");
  CHECK(cfg.output.path.empty());
  CHECK(cfg.params.empty());
  CHECK(cfg.numerics.quad_points == default_config().quad_points);
}

TEST_CASE("config parsing rejects malformed input") {
  const auto parse = [](const std::string& text) {
    return parse_scenario_config(nlohmann::json::parse(text));
  };
  CHECK_THROWS_AS(parse(R"({"scenario": "no-such"})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"scenario": "decay", "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"scenario": "decay", "numerics": {"nope": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse(R"({"scenario": "decay", "numerics": {"quad_points": 1.5}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse(R"({"scenario": "decay", "numerics": {"fd_step": 1.0}})"),
      ConfigError);
  CHECK_THROWS_AS(parse(R"({"scenario": "decay", "constants": {"c": 3e8}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse(R"({"scenario": "decay", "seed": 1.5})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"scenario": "decay", "output": {"format": "xml"}})"),
                  ConfigError);
  CHECK_NOTHROW(
      parse(R"({"scenario": "decay", "numerics": {"quad_points": 65},
                "constants": {"hbar": 2.0}, "seed": 7,
                "output": {"format": "json", "path": "out.json"},
                "params": {"gamma": 0.25}})"));
  // parse_json_text wraps syntax errors in the library error type.
  CHECK_THROWS_AS(parse_json_text("{not json", "test"), ConfigError);
}

TEST_CASE("unknown scenario parameters are rejected at run time") {
  ScenarioConfig cfg = config_for("decay");
  cfg.params["typo_param"] = 1.0;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
}

TEST_CASE("command-line overrides reach every config section") {
  ScenarioConfig cfg = config_for("decay");

  apply_override(cfg, "gamma=0.25");
  CHECK(cfg.params.at("gamma").get<double>() == 0.25);

  apply_override(cfg, "numerics.quad_points=129");
  CHECK(cfg.numerics.quad_points == 129);

  apply_override(cfg, "constants.hbar=2.0");
  CHECK(cfg.constants.hbar == 2.0);

  apply_override(cfg, "seed=42");
  CHECK(cfg.seed == 42);

  apply_override(cfg, "output.format=json");
  CHECK(cfg.output.format == "json");

  apply_override(cfg, "scenario=phase-clock");
  CHECK(cfg.scenario == "phase-clock");

  // Unquoted strings pass through verbatim.
  ScenarioConfig path_cfg = config_for("classical-path");
  apply_override(path_cfg, "model=bernoulli");
  CHECK(path_cfg.params.at("model").get<std::string>() == "bernoulli");

  CHECK_THROWS_AS(apply_override(cfg, "numerics.quad_points=1.5"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "output.format=yaml"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "no_equals_sign"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "=5"), ConfigError);
}

TEST_CASE("environment seed wins over the config seed") {
  ScenarioConfig cfg = config_for("clock-quality");
  cfg.seed = 5;

  unsetenv("LAMBDA_CLOCK_SEED");
  apply_env_seed(cfg);
  CHECK(cfg.seed == 5);

  setenv("LAMBDA_CLOCK_SEED", "123", 1);
  apply_env_seed(cfg);
  CHECK(cfg.seed == 123);

  setenv("LAMBDA_CLOCK_SEED", "12x", 1);
  CHECK_THROWS_AS(apply_env_seed(cfg), ConfigError);
  unsetenv("LAMBDA_CLOCK_SEED");
}

TEST_CASE("every scenario passes its own checks at the defaults") {
  for (const std::string& name : scenario_names()) {
    INFO("scenario " << name);
    const ScenarioReport report = run_scenario(config_for(name));
    CHECK(report.scenario == name);
    REQUIRE(!report.checks.empty());
    for (const auto& c : report.checks) {
      INFO("check " << c.name << " measured=" << c.measured
                    << " expected=" << c.expected
                    << " tolerance=" << c.tolerance);
      CHECK(c.pass);
    }
    CHECK(report.all_pass());
  }
}

TEST_CASE("qubit clock accumulates pi over a half turn") {
  const ScenarioReport report = run_scenario(config_for("qubit-clock"));
  CHECK(std::abs(summary_value(report, "Lambda_total") - M_PI) <= 1e-6);
  CHECK(std::abs(summary_value(report, "qfi") - 1.0) <= 1e-12);
  const std::string csv = emit_report_csv(report);
  CHECK(csv.rfind("t,Lambda,DeltaH,overlap\n", 0) == 0);
  CHECK(csv.find("# scenario = qubit-clock\n") != std::string::npos);
  CHECK(csv.find("# check ") != std::string::npos);
}

TEST_CASE("decay defaults reconstruct t = 4") {
  const ScenarioReport report = run_scenario(config_for("decay"));
  CHECK(std::abs(summary_value(report, "t_reconstructed_total") - 4.0) <=
        1e-12);
  CHECK(std::abs(summary_value(report, "Lambda_D_total") - 2.0) <= 1e-12);
}

TEST_CASE("reports are byte-identical across reruns") {
  for (const std::string format : {"csv", "json"}) {
    ScenarioConfig cfg = config_for("clock-quality");
    cfg.seed = 9;
    const std::string first = emit_report(run_scenario(cfg), format);
    const std::string second = emit_report(run_scenario(cfg), format);
    CHECK(first == second);

    cfg.seed = 10;
    CHECK(emit_report(run_scenario(cfg), format) != first);
  }
  CHECK_THROWS_AS(emit_report(ScenarioReport{}, "yaml"), ConfigError);
}

TEST_CASE("JSON reports parse back with stable content") {
  ScenarioConfig cfg = config_for("decay");
  cfg.seed = 3;
  const ScenarioReport report = run_scenario(cfg);
  const nlohmann::json parsed =
      nlohmann::json::parse(emit_report_json(report));
  CHECK(parsed["scenario"] == "decay");
  CHECK(parsed["seed"] == 3);
  CHECK(parsed["all_pass"] == true);
  CHECK(parsed["series"]["t"].size() == 101);
  CHECK(parsed["checks"].size() == report.checks.size());
  const double total = parsed["summary"]["t_reconstructed_total"].get<double>();
  CHECK(std::abs(total - 4.0) <= 1e-12);
}

TEST_CASE("reports without series still emit the comment block") {
  ScenarioReport report;
  report.scenario = "decay";
  report.seed = 1;
  report.summary.emplace_back("only", 2.0);
  const std::string csv = emit_report_csv(report);
  CHECK(csv.rfind("\n# scenario = decay\n", 0) == 0);
  CHECK(csv.find("# only = 2\n") != std::string::npos);

  report.series.emplace_back("a", std::vector<double>{1.0, 2.0});
  report.series.emplace_back("b", std::vector<double>{1.0});
  CHECK_THROWS_AS(emit_report_csv(report), IoError);
}

TEST_CASE("records scenario accepts an input file") {
  const std::string path = "records_scenario_input.json";
  write_text_file(path,
                  R"({"states": [[[0.9,0],[0,0.1]],
                                 [[0.7,0],[0,0.3]],
                                 [[0.6,0],[0,0.4]]]})");
  ScenarioConfig cfg = config_for("records");
  cfg.params["input"] = path;
  const ScenarioReport report = run_scenario(cfg);
  std::remove(path.c_str());
  // Partial-sum monotonicity is checked for any input; the builtin-chain
  // oracles only apply without one.
  REQUIRE(!report.checks.empty());
  CHECK(report.all_pass());
  CHECK(summary_value(report, "Lambda_rec") > 0.0);

  cfg.params["input"] = "does_not_exist.json";
  CHECK_THROWS_AS(run_scenario(cfg), IoError);
}
