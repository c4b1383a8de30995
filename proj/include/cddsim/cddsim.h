/* Copyright 2026 The cddsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the cddsim core: continuous-dynamical-decoupling protection
 * of a sqrt(SWAP) gate under bosonic decoherence. Handles are opaque; every
 * entry point returns a cddsim_status, and cddsim_last_error() describes the
 * most recent failure on the calling thread.
 */

#ifndef CDDSIM_CDDSIM_H
#define CDDSIM_CDDSIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cddsim_status {
  CDDSIM_OK = 0,
  /* Numerical or invariant failure at run time (also the CLI exit code). */
  CDDSIM_ERR_RUNTIME = 1,
  /* Malformed configuration. */
  CDDSIM_ERR_CONFIG = 2
} cddsim_status;

typedef struct cddsim_scenario cddsim_scenario;
typedef struct cddsim_trajectory cddsim_trajectory;

const char* cddsim_version(void);

/* Thread-local message for the last failing call; never NULL. */
const char* cddsim_last_error(void);

/* Preset catalog. The returned array of length *count is static. */
const char* const* cddsim_preset_names(size_t* count);

cddsim_status cddsim_scenario_from_preset(const char* name, cddsim_scenario** out);
cddsim_status cddsim_scenario_from_json(const char* json_text, cddsim_scenario** out);

/* Dotted-path override into the resolved config, e.g.
 * cddsim_scenario_set(s, "sim.bath.eta", "0.05"). */
cddsim_status cddsim_scenario_set(cddsim_scenario* scenario, const char* path, const char* value);

/* Resolved scenario document as JSON; free with cddsim_string_free. */
cddsim_status cddsim_scenario_to_json(const cddsim_scenario* scenario, char** out);

const char* cddsim_scenario_name(const cddsim_scenario* scenario);
int cddsim_scenario_has_sweep(const cddsim_scenario* scenario);
void cddsim_scenario_free(cddsim_scenario* scenario);
void cddsim_string_free(char* text);

/* Integrate and write <name>.csv plus <name>.manifest.json under out_dir.
 * On success *out_trajectory (if non-NULL) receives a handle. */
cddsim_status cddsim_run(const cddsim_scenario* scenario, const char* out_dir,
                         cddsim_trajectory** out_trajectory);

/* One integration per sweep value, parallel up to max_threads (0 = hardware
 * limit, also capped by CDD_SIM_THREADS). Writes <name>_sweep.csv. */
cddsim_status cddsim_sweep(const cddsim_scenario* scenario, const char* out_dir, int max_threads);

/* Sweep a preset by name. "fig3_sweep" expands to its four bath cases and
 * writes one CSV per case. */
cddsim_status cddsim_sweep_preset(const char* name, const char* out_dir, int max_threads);

/* Kernel samples on the scenario grid: CSV "t,re_T1,im_T1,re_T2,im_T2",
 * time in units of tau. */
cddsim_status cddsim_write_kernels_csv(const cddsim_scenario* scenario, const char* path);

/* Cross-module invariant suite. Prints one line per check to stdout when
 * verbose is nonzero; writes a JSON report when json_path is non-NULL.
 * Returns CDDSIM_ERR_RUNTIME if any check fails. inject_kernel_fault is a
 * test hook that corrupts one kernel-table entry. */
cddsim_status cddsim_check(const char* json_path, int verbose, int inject_kernel_fault);

/* Emit a gnuplot script for trajectory CSVs (2x2 panels) or sweep CSVs
 * (two panels). */
cddsim_status cddsim_emit_plot_script(const char* const* csv_paths, size_t n_paths,
                                      const char* out_path);

typedef enum cddsim_column {
  CDDSIM_COL_TIME = 0, /* t / tau */
  CDDSIM_COL_CONCURRENCE = 1,
  CDDSIM_COL_FIDELITY = 2,
  CDDSIM_COL_TRACE_ERROR = 3,
  CDDSIM_COL_MIN_EIGENVALUE = 4
} cddsim_column;

size_t cddsim_trajectory_size(const cddsim_trajectory* trajectory);
cddsim_status cddsim_trajectory_series(const cddsim_trajectory* trajectory, cddsim_column column,
                                       double* buffer, size_t capacity);
void cddsim_trajectory_free(cddsim_trajectory* trajectory);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CDDSIM_CDDSIM_H */
