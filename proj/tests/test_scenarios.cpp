// Copyright 2026 The cddsim Authors
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

#include "scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <clocale>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "errors.hpp"

using namespace cddsim;
namespace fs = std::filesystem;

namespace {

std::string test_dir() {
  const fs::path dir = fs::temp_directory_path() / "cddsim_scenario_tests";
  fs::create_directories(dir);
  return dir.string();
}

// Fast scenario for file-format tests: noiseless, coarse grid.
Scenario quick_scenario(const std::string& name) {
  Scenario s = scenario_from_preset("noiseless");
  s = with_override(s, "name", "\"" + name + "\"");
  s = with_override(s, "sim.n_steps", "400");
  return s;
}

}  // namespace

TEST_CASE("every preset resolves to a fully explicit document") {
  for (const auto& name : preset_names()) {
    if (name == "fig3_sweep") {
      CHECK(expand_preset(name).size() == 4);
      CHECK_THROWS_AS(scenario_from_preset(name), ConfigError);
      continue;
    }
    const Scenario s = scenario_from_preset(name);
    CHECK(s.name == name);
    // Reparsing the resolved document must be the identity.
    const Scenario again = scenario_from_json(s.doc);
    CHECK(again.doc == s.doc);
    // No hidden defaults: the big knobs are spelled out.
    CHECK(s.doc["sim"]["bath"].contains("eta"));
    CHECK(s.doc["sim"]["bath"]["temperature"].contains("rad_per_tau"));
    CHECK(s.doc["sim"]["control"].contains("mode"));
    CHECK(s.doc["sim"].contains("initial_ket"));
    CHECK(s.doc["sim"].contains("n_steps"));
  }
  CHECK_THROWS_AS(scenario_from_preset("not_a_preset"), ConfigError);
}

TEST_CASE("preset parameters match the default experiment block") {
  const Scenario s = scenario_from_preset("fig1_protected_independent");
  CHECK(s.sim.gate.j == doctest::Approx(M_PI / 8.0));
  CHECK(s.sim.control.n_x == 14);
  CHECK(s.sim.control.n_z == 7);
  CHECK(s.sim.control.omega == doctest::Approx(2.0 * M_PI));
  CHECK(s.sim.bath.eta == doctest::Approx(0.05));
  CHECK(s.sim.bath.omega_c == doctest::Approx(2.0 * M_PI));
  CHECK(s.sim.bath.omega_c / s.sim.bath.temperature_rad == doctest::Approx(0.24).epsilon(1e-3));
  CHECK(s.sim.n_steps == 4000);

  const Scenario residual = scenario_from_preset("fig2_residual_superohmic_common");
  CHECK(residual.sim.control.mode == ControlMode::DephasingOnly);
  CHECK(residual.sim.control.n_z == 0);
  CHECK(residual.sim.bath.s_exp == 3.0);
  CHECK(residual.sim.bath.topology == BathTopology::Common);

  const Scenario sweep_case = scenario_from_preset("fig3_sweep_common_ohmic");
  REQUIRE(sweep_case.sweep.has_value());
  CHECK(sweep_case.sweep->path == "sim.bath.lambda_ad");
  CHECK(sweep_case.sweep->values.size() == 11);
  CHECK(sweep_case.sweep->values.front() == 0.0);
  CHECK(sweep_case.sweep->values.back() == 1.0);
}

TEST_CASE("strict config parsing rejects unknown or conflicting keys") {
  CHECK_THROWS_AS(scenario_from_json_text("{\"name\":\"x\",\"typo\":1}"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json_text("{\"name\":\"x\",\"sim\":{\"gait\":{}}}"), ConfigError);
  CHECK_THROWS_AS(
      scenario_from_json_text("{\"name\":\"x\",\"sim\":{\"bath\":{\"etta\":0.1}}}"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json_text(
                      "{\"name\":\"x\",\"sim\":{\"bath\":{\"lambda_ad\":1.0,"
                      "\"lambda_1\":[[1,0],[0,0],[0,0]],\"lambda_2\":[[1,0],[0,0],[0,0]]}}}"),
                  ConfigError);
  CHECK_THROWS_AS(
      scenario_from_json_text("{\"name\":\"x\",\"sim\":{\"control\":{\"mode\":\"sometimes\"}}}"),
      ConfigError);
  CHECK_THROWS_AS(scenario_from_json_text("{\"sim\":{}}"), ConfigError);  // missing name
  CHECK_THROWS_AS(scenario_from_json_text("not json at all"), ConfigError);
  CHECK_THROWS_AS(
      scenario_from_json_text("{\"name\":\"x\",\"outputs\":[\"concurrence\",\"charm\"]}"),
      ConfigError);

  // Invalid physics combinations surface as config errors too.
  CHECK_THROWS_AS(
      scenario_from_json_text("{\"name\":\"x\",\"sim\":{\"control\":{\"n_x\":0}}}"), ConfigError);
  CHECK_THROWS_AS(
      scenario_from_json_text("{\"name\":\"x\",\"sim\":{\"bath\":{\"eta\":-1.0}}}"), ConfigError);
}

TEST_CASE("dotted-path overrides") {
  Scenario s = scenario_from_preset("noiseless");
  s = with_override(s, "sim.bath.eta", "0.025");
  CHECK(s.sim.bath.eta == doctest::Approx(0.025));
  s = with_override(s, "sim.control.mode", "off");
  CHECK(s.sim.control.mode == ControlMode::Off);
  s = with_override(s, "sim.bath.topology", "common");
  CHECK(s.sim.bath.topology == BathTopology::Common);
  CHECK_THROWS_AS(with_override(s, "sim.bath.no_such_field", "1"), ConfigError);
  CHECK_THROWS_AS(with_override(s, "sim..eta", "1"), ConfigError);
  CHECK_THROWS_AS(with_override(s, "sim.n_steps", "20"), ConfigError);  // revalidated
}

TEST_CASE("run writes CSV and manifest that round-trip") {
  const std::string dir = test_dir();
  const Scenario s = quick_scenario("roundtrip");
  const RunResult result = run(s, dir);
  CHECK(result.trajectory.size() == 401);

  const CsvTable table = read_csv(result.csv_path);
  REQUIRE(table.header.size() == 5);
  CHECK(table.header[0] == "t_over_tau");
  CHECK(table.header[1] == "concurrence");
  CHECK(table.header[2] == "fidelity");
  CHECK(table.header[3] == "trace_err");
  CHECK(table.header[4] == "min_eig");
  REQUIRE(table.rows.size() == 401);
  CHECK(table.rows.front()[0] == 0.0);
  CHECK(table.rows.back()[0] == doctest::Approx(1.0));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(table.rows[i][1] == result.trajectory.concurrence[i]);  // exact round trip
    CHECK(table.rows[i][2] == result.trajectory.fidelity[i]);
  }

  std::ifstream manifest(result.manifest_path);
  REQUIRE(manifest.good());
  Json doc = Json::parse(manifest);
  CHECK(doc["code_version"].is_string());
  CHECK(doc["scenario"]["name"] == "roundtrip");
  // The manifest reparses into the same scenario.
  const Scenario echoed = scenario_from_json(doc["scenario"]);
  CHECK(echoed.doc == s.doc);

  // Re-running overwrites deterministically.
  const RunResult second = run(s, dir);
  std::ifstream f1(result.csv_path), f2(second.csv_path);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
}

TEST_CASE("CSV output is independent of the C locale") {
  // If a comma-decimal locale exists, switch to it; to_chars must not care.
  const char* previous = std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  const std::string dir = test_dir();
  const RunResult result = run(quick_scenario("locale_check"), dir);
  std::ifstream in(result.csv_path);
  std::string header, first_row;
  std::getline(in, header);
  std::getline(in, first_row);
  std::setlocale(LC_NUMERIC, "C");
  if (previous == nullptr) {
    MESSAGE("comma-decimal locale unavailable; checking default locale output only");
  }
  CHECK(first_row.find(';') == std::string::npos);
  CHECK(std::count(first_row.begin(), first_row.end(), ',') == 4);
  const CsvTable table = read_csv(result.csv_path);
  CHECK(table.rows.size() == 401);
}

TEST_CASE("sweep runs all points and reports failures without stopping") {
  const std::string dir = test_dir();
  Scenario s = quick_scenario("mini_sweep");
  s = with_override(s, "sim.bath.eta", "0.01");
  s = with_override(s, "sim.control.mode", "off");
  s = with_override(s, "sim.n_steps", "200");
  Json doc = s.doc;
  doc["sweep"] = {{"path", "sim.bath.lambda_ad"}, {"values", {0.0, 0.5, 1.0}}};
  s = scenario_from_json(doc);

  const SweepResult result = sweep(s, dir, 2);
  CHECK(result.failures.empty());
  REQUIRE(result.rows.size() == 3);
  const CsvTable table = read_csv(result.csv_path);
  CHECK(table.header ==
        std::vector<std::string>{"lambda", "concurrence_at_tau", "fidelity_at_tau"});
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0][0] == 0.0);
  CHECK(table.rows[2][0] == 1.0);
  // lambda_ad = 0 leaves only the (protected-off but harmless at eta = 0.01)
  // dephasing channel; concurrence stays ordered in the coupling.
  CHECK(table.rows[0][1] >= table.rows[2][1]);

  // A sweep value that breaks validation is recorded, the rest continue.
  Json bad = s.doc;
  bad["sweep"] = {{"path", "sim.t_max"}, {"values", {1.0, -2.0}}};
  const SweepResult partial = sweep(scenario_from_json(bad), dir, 1);
  CHECK(partial.rows.size() == 1);
  CHECK(partial.failures.size() == 1);

  CHECK_THROWS_AS(sweep(quick_scenario("no_sweep_block"), dir, 1), ConfigError);
}

TEST_CASE("plot script emission") {
  const std::string dir = test_dir();
  const RunResult indep = run(quick_scenario("plot_independent"), dir);
  const RunResult common = run(quick_scenario("plot_common"), dir);

  const std::string script = dir + "/fig.gp";
  emit_plot_script({indep.csv_path, common.csv_path}, script);
  std::ifstream in(script);
  REQUIRE(in.good());
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().find("multiplot layout 2,2") != std::string::npos);
  CHECK(text.str().find("(a) concurrence, independent") != std::string::npos);
  CHECK(text.str().find("(d) fidelity, common") != std::string::npos);
  CHECK(text.str().find("plot_common.csv") != std::string::npos);

  // Sweep CSVs get the two-panel layout; mixing kinds is an error.
  const std::string sweep_csv = dir + "/fake_sweep.csv";
  {
    std::ofstream out(sweep_csv);
    out << "lambda,concurrence_at_tau,fidelity_at_tau\n0,1,1\n";
  }
  const std::string sweep_script = dir + "/sweep.gp";
  emit_plot_script({sweep_csv}, sweep_script);
  std::ifstream sin(sweep_script);
  std::stringstream stext;
  stext << sin.rdbuf();
  CHECK(stext.str().find("multiplot layout 1,2") != std::string::npos);

  CHECK_THROWS_AS(emit_plot_script({}, dir + "/empty.gp"), ConfigError);
  CHECK_THROWS_AS(emit_plot_script({indep.csv_path, sweep_csv}, dir + "/mixed.gp"), ConfigError);

  // Idempotent overwrite.
  emit_plot_script({indep.csv_path, common.csv_path}, script);
  std::ifstream again(script);
  std::stringstream text2;
  text2 << again.rdbuf();
  CHECK(text.str() == text2.str());
}

TEST_CASE("invariant check suite passes clean and catches injected faults") {
  const auto start = std::chrono::steady_clock::now();
  const CheckReport clean = check();
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& item : clean.items) {
    INFO(item.name, ": ", item.detail);
    CHECK(item.passed);
  }
  CHECK(clean.all_passed());
  CHECK(elapsed < 300.0);
  CHECK(clean.to_json()["all_passed"] == true);

  CheckOptions fault;
  fault.inject_kernel_fault = true;
  const CheckReport faulty = check(fault);
  CHECK(!faulty.all_passed());
  bool kernel_item_failed = false;
  for (const auto& item : faulty.items)
    if (item.name == "kernel_closed_form_ohmic") kernel_item_failed = !item.passed;
  CHECK(kernel_item_failed);
}
