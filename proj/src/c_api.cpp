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

#include "cddsim/cddsim.h"

#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scenarios.hpp"
#include "version.hpp"

namespace {

thread_local std::string g_last_error = "no error";

cddsim_status fail(cddsim_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <typename Fn>
cddsim_status guard(Fn&& fn) {
  try {
    return fn();
  } catch (const cddsim::ConfigError& e) {
    return fail(CDDSIM_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(CDDSIM_ERR_RUNTIME, e.what());
  }
}

}  // namespace

struct cddsim_scenario {
  cddsim::Scenario scenario;
};

struct cddsim_trajectory {
  cddsim::Trajectory trajectory;
};

extern "C" {

const char* cddsim_version(void) { return cddsim::kVersion; }

const char* cddsim_last_error(void) { return g_last_error.c_str(); }

const char* const* cddsim_preset_names(size_t* count) {
  static const std::vector<std::string> names = cddsim::preset_names();
  static const std::vector<const char*> pointers = [] {
    std::vector<const char*> p;
    for (const auto& name : names) p.push_back(name.c_str());
    return p;
  }();
  if (count != nullptr) *count = pointers.size();
  return pointers.data();
}

cddsim_status cddsim_scenario_from_preset(const char* name, cddsim_scenario** out) {
  if (name == nullptr || out == nullptr)
    return fail(CDDSIM_ERR_CONFIG, "null argument to cddsim_scenario_from_preset");
  return guard([&] {
    *out = new cddsim_scenario{cddsim::scenario_from_preset(name)};
    return CDDSIM_OK;
  });
}

cddsim_status cddsim_scenario_from_json(const char* json_text, cddsim_scenario** out) {
  if (json_text == nullptr || out == nullptr)
    return fail(CDDSIM_ERR_CONFIG, "null argument to cddsim_scenario_from_json");
  return guard([&] {
    *out = new cddsim_scenario{cddsim::scenario_from_json_text(json_text)};
    return CDDSIM_OK;
  });
}

cddsim_status cddsim_scenario_set(cddsim_scenario* scenario, const char* path, const char* value) {
  if (scenario == nullptr || path == nullptr || value == nullptr)
    return fail(CDDSIM_ERR_CONFIG, "null argument to cddsim_scenario_set");
  return guard([&] {
    scenario->scenario = cddsim::with_override(scenario->scenario, path, value);
    return CDDSIM_OK;
  });
}

cddsim_status cddsim_scenario_to_json(const cddsim_scenario* scenario, char** out) {
  if (scenario == nullptr || out == nullptr)
    return fail(CDDSIM_ERR_CONFIG, "null argument to cddsim_scenario_to_json");
  return guard([&] {
    const std::string text = scenario->scenario.doc.dump(2);
    *out = new char[text.size() + 1];
    std::memcpy(*out, text.c_str(), text.size() + 1);
    return CDDSIM_OK;
  });
}

const char* cddsim_scenario_name(const cddsim_scenario* scenario) {
  return scenario == nullptr ? "" : scenario->scenario.name.c_str();
}

int cddsim_scenario_has_sweep(const cddsim_scenario* scenario) {
  return scenario != nullptr && scenario->scenario.sweep.has_value() ? 1 : 0;
}

void cddsim_scenario_free(cddsim_scenario* scenario) { delete scenario; }

void cddsim_string_free(char* text) { delete[] text; }

cddsim_status cddsim_run(const cddsim_scenario* scenario, const char* out_dir,
                         cddsim_trajectory** out_trajectory) {
  if (scenario == nullptr) return fail(CDDSIM_ERR_CONFIG, "null scenario in cddsim_run");
  return guard([&] {
    cddsim::RunResult result =
        cddsim::run(scenario->scenario, out_dir == nullptr ? "." : out_dir);
    if (out_trajectory != nullptr)
      *out_trajectory = new cddsim_trajectory{std::move(result.trajectory)};
    return CDDSIM_OK;
  });
}

cddsim_status cddsim_sweep(const cddsim_scenario* scenario, const char* out_dir, int max_threads) {
  if (scenario == nullptr) return fail(CDDSIM_ERR_CONFIG, "null scenario in cddsim_sweep");
  return guard([&] {
    const cddsim::SweepResult result =
        cddsim::sweep(scenario->scenario, out_dir == nullptr ? "." : out_dir, max_threads);
    if (!result.failures.empty()) {
      std::ostringstream msg;
      msg << result.failures.size() << " sweep point(s) failed; first: " << result.failures[0];
      return fail(CDDSIM_ERR_RUNTIME, msg.str().c_str());
    }
    return CDDSIM_OK;
  });
}

cddsim_status cddsim_sweep_preset(const char* name, const char* out_dir, int max_threads) {
  if (name == nullptr) return fail(CDDSIM_ERR_CONFIG, "null preset name in cddsim_sweep_preset");
  return guard([&] {
    std::vector<std::string> failures;
    for (const cddsim::Scenario& scenario : cddsim::expand_preset(name)) {
      const cddsim::SweepResult result =
          cddsim::sweep(scenario, out_dir == nullptr ? "." : out_dir, max_threads);
      failures.insert(failures.end(), result.failures.begin(), result.failures.end());
    }
    if (!failures.empty()) {
      std::ostringstream msg;
      msg << failures.size() << " sweep point(s) failed; first: " << failures[0];
      return fail(CDDSIM_ERR_RUNTIME, msg.str().c_str());
    }
    return CDDSIM_OK;
  });
}

cddsim_status cddsim_write_kernels_csv(const cddsim_scenario* scenario, const char* path) {
  if (scenario == nullptr || path == nullptr)
    return fail(CDDSIM_ERR_CONFIG, "null argument to cddsim_write_kernels_csv");
  return guard([&] {
    const cddsim::SimConfig& sim = scenario->scenario.sim;
    const cddsim::KernelSet table =
        cddsim::build_kernel_table(sim.bath, sim.t_max, sim.n_steps, sim.quad);
    std::ostringstream out;
    out << "t,re_T1,im_T1,re_T2,im_T2\n";
    out.precision(17);
    for (int i = 0; i <= table.n_steps; ++i) {
      const double t = i * table.dt / sim.gate.tau;
      const cddsim::Complex t1 = table.t1_at(i);
      const cddsim::Complex t2 = table.t2_at(i);
      out << t << ',' << t1.real() << ',' << t1.imag() << ',' << t2.real() << ',' << t2.imag()
          << '\n';
    }
    std::FILE* f = std::fopen(path, "wb");
    if (f == nullptr) throw cddsim::SimulationError(std::string("cannot open ") + path);
    const std::string text = out.str();
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
    return CDDSIM_OK;
  });
}

cddsim_status cddsim_check(const char* json_path, int verbose, int inject_kernel_fault) {
  return guard([&] {
    cddsim::CheckOptions options;
    options.inject_kernel_fault = inject_kernel_fault != 0;
    const cddsim::CheckReport report = cddsim::check(options);
    if (verbose != 0) {
      for (const auto& item : report.items)
        std::printf("[%s] %s: %s\n", item.passed ? "PASS" : "FAIL", item.name.c_str(),
                    item.detail.c_str());
    }
    if (json_path != nullptr) {
      const std::string text = report.to_json().dump(2) + "\n";
      std::FILE* f = std::fopen(json_path, "wb");
      if (f == nullptr) throw cddsim::SimulationError(std::string("cannot open ") + json_path);
      std::fwrite(text.data(), 1, text.size(), f);
      std::fclose(f);
    }
    if (!report.all_passed()) return fail(CDDSIM_ERR_RUNTIME, "one or more checks failed");
    return CDDSIM_OK;
  });
}

cddsim_status cddsim_emit_plot_script(const char* const* csv_paths, size_t n_paths,
                                      const char* out_path) {
  if (csv_paths == nullptr || out_path == nullptr)
    return fail(CDDSIM_ERR_CONFIG, "null argument to cddsim_emit_plot_script");
  return guard([&] {
    std::vector<std::string> paths(csv_paths, csv_paths + n_paths);
    cddsim::emit_plot_script(paths, out_path);
    return CDDSIM_OK;
  });
}

size_t cddsim_trajectory_size(const cddsim_trajectory* trajectory) {
  return trajectory == nullptr ? 0 : trajectory->trajectory.size();
}

cddsim_status cddsim_trajectory_series(const cddsim_trajectory* trajectory, cddsim_column column,
                                       double* buffer, size_t capacity) {
  if (trajectory == nullptr || buffer == nullptr)
    return fail(CDDSIM_ERR_CONFIG, "null argument to cddsim_trajectory_series");
  const cddsim::Trajectory& traj = trajectory->trajectory;
  if (capacity < traj.size())
    return fail(CDDSIM_ERR_CONFIG, "buffer too small in cddsim_trajectory_series");
  const std::vector<double>* series = nullptr;
  switch (column) {
    case CDDSIM_COL_TIME: series = &traj.times; break;
    case CDDSIM_COL_CONCURRENCE: series = &traj.concurrence; break;
    case CDDSIM_COL_FIDELITY: series = &traj.fidelity; break;
    case CDDSIM_COL_TRACE_ERROR: series = &traj.trace_error; break;
    case CDDSIM_COL_MIN_EIGENVALUE: series = &traj.min_eigenvalue; break;
  }
  if (series == nullptr) return fail(CDDSIM_ERR_CONFIG, "unknown trajectory column");
  std::memcpy(buffer, series->data(), series->size() * sizeof(double));
  return CDDSIM_OK;
}

void cddsim_trajectory_free(cddsim_trajectory* trajectory) { delete trajectory; }

}  // extern "C"
