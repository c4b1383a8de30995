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

#ifndef CDDSIM_SCENARIOS_HPP
#define CDDSIM_SCENARIOS_HPP

#include <optional>
#include <string>
#include <vector>

// vendored single-header nlohmann/json
#include "json.hpp"

#include "dynamics.hpp"

namespace cddsim {

using Json = nlohmann::ordered_json;

struct SweepSpec {
  std::string path;  // dotted path into the resolved document, e.g. "sim.bath.lambda_ad"
  std::vector<double> values;
};

// A named, fully resolved experiment. `doc` is the explicit JSON form (every
// field present); it is the unit of overriding, sweeping, and manifests.
struct Scenario {
  std::string name;
  SimConfig sim;
  std::optional<SweepSpec> sweep;
  std::vector<std::string> outputs;  // metric columns, subset of the canonical four
  Json doc;
};

// Strict parse: unknown keys anywhere are a ConfigError.
Scenario scenario_from_json(const Json& doc);
Scenario scenario_from_json_text(const std::string& text);

std::vector<std::string> preset_names();
Scenario scenario_from_preset(const std::string& name);

// "fig3_sweep" expands to its four bath cases; every other name expands to
// itself. Unknown names throw ConfigError.
std::vector<Scenario> expand_preset(const std::string& name);

// Set `dotted` (e.g. "sim.bath.eta") in the resolved document and reparse.
// The path must already exist: resolved documents are fully explicit.
Scenario with_override(const Scenario& base, const std::string& dotted, const std::string& value);

struct RunResult {
  Trajectory trajectory;
  std::string csv_path;
  std::string manifest_path;
};

RunResult run(const Scenario& scenario, const std::string& out_dir);

struct SweepRow {
  double value = 0.0;
  double concurrence_at_tau = 0.0;
  double fidelity_at_tau = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> failures;  // "value=...: message"
  std::string csv_path;
  std::string manifest_path;
};

// One integration per sweep value, parallel up to max_threads (0 = hardware),
// further capped by the CDD_SIM_THREADS environment variable. Kernel tables
// are shared across points whenever the swept path cannot change them.
SweepResult sweep(const Scenario& scenario, const std::string& out_dir, int max_threads = 0);

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool all_passed() const;
  Json to_json() const;
};

struct CheckOptions {
  // Test hook: corrupt one kernel-table entry so the closed-form comparison
  // must fail. Exercised by the test suite to prove the check has teeth.
  bool inject_kernel_fault = false;
};

// Cross-module invariant suite: decoupling residuals, kernel closed forms,
// conjugation oracles, spectral peak, noiseless gate, pure-dephasing decay,
// generator structure.
CheckReport check(const CheckOptions& options = {});

// Emit a gnuplot script: trajectory CSVs get the 2x2 panel layout
// (concurrence/fidelity x independent/common), sweep CSVs ("*_sweep.csv") the
// two-panel layout. Mixing the two kinds in one call is an error.
void emit_plot_script(const std::vector<std::string>& csv_paths, const std::string& out_path);

// Small strict CSV reader (header + numeric rows); used to round-trip sweep
// and trajectory outputs.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);

}  // namespace cddsim

#endif
