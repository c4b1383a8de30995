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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cddsim/cddsim.h"

namespace {

int report_status(cddsim_status status) {
  if (status != CDDSIM_OK) std::cerr << "error: " << cddsim_last_error() << "\n";
  return static_cast<int>(status);
}

bool looks_like_file(const std::string& spec) {
  return spec.find('.') != std::string::npos || spec.find('/') != std::string::npos;
}

using ScenarioPtr = std::unique_ptr<cddsim_scenario, decltype(&cddsim_scenario_free)>;

// Resolve a preset name or a JSON config file, then apply --set overrides.
cddsim_status load_scenario(const std::string& spec, const std::vector<std::string>& overrides,
                            ScenarioPtr& out) {
  cddsim_scenario* raw = nullptr;
  cddsim_status status = CDDSIM_OK;
  if (looks_like_file(spec)) {
    std::ifstream in(spec);
    if (!in) {
      std::cerr << "error: cannot open config file " << spec << "\n";
      return CDDSIM_ERR_CONFIG;
    }
    std::stringstream text;
    text << in.rdbuf();
    status = cddsim_scenario_from_json(text.str().c_str(), &raw);
  } else {
    status = cddsim_scenario_from_preset(spec.c_str(), &raw);
  }
  if (status != CDDSIM_OK) return status;
  out = ScenarioPtr(raw, &cddsim_scenario_free);
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects path=value, got '" << item << "'\n";
      return CDDSIM_ERR_CONFIG;
    }
    status = cddsim_scenario_set(out.get(), item.substr(0, eq).c_str(),
                                 item.substr(eq + 1).c_str());
    if (status != CDDSIM_OK) return status;
  }
  return CDDSIM_OK;
}

void print_run_summary(const cddsim_trajectory* traj) {
  const size_t n = cddsim_trajectory_size(traj);
  if (n == 0) return;
  std::vector<double> concurrence(n), fidelity(n), trace_err(n);
  cddsim_trajectory_series(traj, CDDSIM_COL_CONCURRENCE, concurrence.data(), n);
  cddsim_trajectory_series(traj, CDDSIM_COL_FIDELITY, fidelity.data(), n);
  cddsim_trajectory_series(traj, CDDSIM_COL_TRACE_ERROR, trace_err.data(), n);
  double f_min = 1.0, trace_max = 0.0;
  for (size_t i = 0; i < n; ++i) {
    f_min = std::min(f_min, fidelity[i]);
    trace_max = std::max(trace_max, trace_err[i]);
  }
  std::printf("concurrence(t_max) = %.6f, min fidelity = %.6f, max trace error = %.3g\n",
              concurrence[n - 1], f_min, trace_max);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cddsim: sqrt(SWAP) gate under continuous dynamical decoupling"};
  app.set_version_flag("--version", cddsim_version());
  app.require_subcommand(1);

  std::string spec, out_dir = ".", out_file, json_report;
  std::vector<std::string> overrides, csv_paths;
  int threads = 0;
  bool quiet = false, list_presets = false, inject_fault = false;

  auto* run_cmd = app.add_subcommand("run", "Integrate one scenario and write CSV + manifest");
  run_cmd->add_option("scenario", spec, "Preset name or JSON config file");
  run_cmd->add_option("--set", overrides, "Dotted-path override, e.g. sim.bath.eta=0.05");
  run_cmd->add_option("--out-dir", out_dir, "Output directory");
  run_cmd->add_flag("--quiet", quiet, "Suppress the summary line");
  run_cmd->add_flag("--list", list_presets, "List preset names and exit");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep and write the sweep CSV");
  sweep_cmd->add_option("scenario", spec, "Preset name or JSON config file")->required();
  sweep_cmd->add_option("--set", overrides, "Dotted-path override applied before sweeping");
  sweep_cmd->add_option("--out-dir", out_dir, "Output directory");
  sweep_cmd->add_option("--threads", threads, "Parallel integrations (0 = hardware)");

  auto* kernels_cmd = app.add_subcommand("kernels", "Dump T1/T2 kernel samples as CSV");
  kernels_cmd->add_option("scenario", spec, "Preset name or JSON config file")->required();
  kernels_cmd->add_option("--out", out_file, "Output CSV path")->required();
  kernels_cmd->add_option("--set", overrides, "Dotted-path override");

  auto* check_cmd = app.add_subcommand("check", "Run the cross-module invariant suite");
  check_cmd->add_option("--json", json_report, "Write a machine-readable report here");
  check_cmd->add_flag("--inject-kernel-fault", inject_fault)->group("");  // test hook, hidden

  auto* plots_cmd = app.add_subcommand("plots", "Emit a gnuplot script for result CSVs");
  plots_cmd->add_option("csv", csv_paths, "Input CSV files")->required();
  plots_cmd->add_option("--out", out_file, "Output script path")->required();

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) {
    if (list_presets) {
      size_t count = 0;
      const char* const* names = cddsim_preset_names(&count);
      for (size_t i = 0; i < count; ++i) std::puts(names[i]);
      return 0;
    }
    if (spec.empty()) {
      std::cerr << "error: missing scenario (preset name or config file)\n";
      return CDDSIM_ERR_CONFIG;
    }
    ScenarioPtr scenario(nullptr, &cddsim_scenario_free);
    if (auto status = load_scenario(spec, overrides, scenario); status != CDDSIM_OK)
      return report_status(status);
    cddsim_trajectory* traj = nullptr;
    const cddsim_status status = cddsim_run(scenario.get(), out_dir.c_str(), &traj);
    if (status == CDDSIM_OK && !quiet) {
      std::printf("wrote %s/%s.csv\n", out_dir.c_str(), cddsim_scenario_name(scenario.get()));
      print_run_summary(traj);
    }
    cddsim_trajectory_free(traj);
    return report_status(status);
  }

  if (sweep_cmd->parsed()) {
    if (!looks_like_file(spec) && overrides.empty())
      return report_status(cddsim_sweep_preset(spec.c_str(), out_dir.c_str(), threads));
    ScenarioPtr scenario(nullptr, &cddsim_scenario_free);
    if (auto status = load_scenario(spec, overrides, scenario); status != CDDSIM_OK)
      return report_status(status);
    return report_status(cddsim_sweep(scenario.get(), out_dir.c_str(), threads));
  }

  if (kernels_cmd->parsed()) {
    ScenarioPtr scenario(nullptr, &cddsim_scenario_free);
    if (auto status = load_scenario(spec, overrides, scenario); status != CDDSIM_OK)
      return report_status(status);
    return report_status(cddsim_write_kernels_csv(scenario.get(), out_file.c_str()));
  }

  if (check_cmd->parsed()) {
    return report_status(cddsim_check(json_report.empty() ? nullptr : json_report.c_str(),
                                      /*verbose=*/1, inject_fault ? 1 : 0));
  }

  if (plots_cmd->parsed()) {
    std::vector<const char*> paths;
    for (const auto& p : csv_paths) paths.push_back(p.c_str());
    return report_status(cddsim_emit_plot_script(paths.data(), paths.size(), out_file.c_str()));
  }

  return 0;
}
