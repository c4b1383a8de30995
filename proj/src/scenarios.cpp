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

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "errors.hpp"
#include "version.hpp"

namespace fs = std::filesystem;

namespace cddsim {

namespace {

// ---------------------------------------------------------------------------
// Formatting and file plumbing
// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw SimulationError("number formatting failed");
  return std::string(buf, ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SimulationError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw SimulationError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

const std::vector<std::string> kCanonicalOutputs = {"concurrence", "fidelity", "trace_err",
                                                    "min_eig"};

// ---------------------------------------------------------------------------
// Strict JSON parsing
// ---------------------------------------------------------------------------

void require_keys(const Json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (key == name) {
        known = true;
        break;
      }
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double get_number(const Json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(where + "." + key + " must be a number");
  return obj[key].get<double>();
}

int get_int(const Json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return obj[key].get<int>();
}

Complex parse_complex(const Json& pair, const std::string& where) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
    throw ConfigError(where + " must be a [re, im] pair");
  return {pair[0].get<double>(), pair[1].get<double>()};
}

CVec3 parse_cvec3(const Json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() != 3) throw ConfigError(where + " must have three entries");
  CVec3 v;
  for (int i = 0; i < 3; ++i) v[i] = parse_complex(arr[i], where);
  return v;
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json cvec3_to_json(const CVec3& v) {
  Json arr = Json::array();
  for (int i = 0; i < 3; ++i) arr.push_back(complex_to_json(v[i]));
  return arr;
}

GateConfig parse_gate(const Json& obj) {
  require_keys(obj, {"j", "tau"}, "sim.gate");
  GateConfig gate;
  gate.j = get_number(obj, "j", gate.j, "sim.gate");
  gate.tau = get_number(obj, "tau", gate.tau, "sim.gate");
  return gate;
}

ControlConfig parse_control(const Json& obj) {
  require_keys(obj, {"mode", "n_x", "n_z", "omega"}, "sim.control");
  ControlConfig control;
  if (obj.contains("mode")) {
    const std::string mode = obj["mode"].get<std::string>();
    if (mode == "full_protection") control.mode = ControlMode::FullProtection;
    else if (mode == "dephasing_only") control.mode = ControlMode::DephasingOnly;
    else if (mode == "off") control.mode = ControlMode::Off;
    else throw ConfigError("sim.control.mode must be full_protection, dephasing_only or off");
  }
  control.n_x = get_int(obj, "n_x", control.n_x, "sim.control");
  control.n_z = get_int(obj, "n_z", control.n_z, "sim.control");
  control.omega = get_number(obj, "omega", control.omega, "sim.control");
  return control;
}

BathSpec parse_bath(const Json& obj) {
  require_keys(obj,
               {"eta", "s_exp", "omega_c", "temperature", "topology", "lambda_ad", "lambda_z",
                "lambda_1", "lambda_2"},
               "sim.bath");
  BathSpec bath;
  bath.eta = get_number(obj, "eta", bath.eta, "sim.bath");
  bath.s_exp = get_number(obj, "s_exp", bath.s_exp, "sim.bath");
  bath.omega_c = get_number(obj, "omega_c", bath.omega_c, "sim.bath");
  if (obj.contains("temperature")) {
    const Json& temp = obj["temperature"];
    require_keys(temp, {"kelvin", "tau_seconds", "rad_per_tau"}, "sim.bath.temperature");
    if (temp.contains("rad_per_tau")) {
      if (temp.contains("kelvin") || temp.contains("tau_seconds"))
        throw ConfigError("sim.bath.temperature: give either rad_per_tau or kelvin+tau_seconds");
      bath.temperature_rad = temp["rad_per_tau"].get<double>();
    } else {
      const double kelvin = get_number(temp, "kelvin", 0.2, "sim.bath.temperature");
      const double tau_s = get_number(temp, "tau_seconds", 1e-9, "sim.bath.temperature");
      bath.temperature_rad = constants::temperature_to_rad(kelvin, tau_s);
    }
  }
  if (obj.contains("topology")) {
    const std::string topo = obj["topology"].get<std::string>();
    if (topo == "common") bath.topology = BathTopology::Common;
    else if (topo == "independent") bath.topology = BathTopology::Independent;
    else throw ConfigError("sim.bath.topology must be common or independent");
  }
  const bool scalar_form = obj.contains("lambda_ad") || obj.contains("lambda_z");
  const bool vector_form = obj.contains("lambda_1") || obj.contains("lambda_2");
  if (scalar_form && vector_form)
    throw ConfigError("sim.bath: give either lambda_ad/lambda_z or lambda_1/lambda_2, not both");
  if (vector_form) {
    if (!obj.contains("lambda_1") || !obj.contains("lambda_2"))
      throw ConfigError("sim.bath: lambda_1 and lambda_2 must both be present");
    bath.lambda_1 = parse_cvec3(obj["lambda_1"], "sim.bath.lambda_1");
    bath.lambda_2 = parse_cvec3(obj["lambda_2"], "sim.bath.lambda_2");
  } else {
    const double ad = get_number(obj, "lambda_ad", 1.0, "sim.bath");
    const double z = get_number(obj, "lambda_z", 1.0, "sim.bath");
    bath.lambda_1 = make_lambda(ad, z);
    bath.lambda_2 = bath.lambda_1;
  }
  return bath;
}

Ket parse_ket(const Json& arr) {
  if (!arr.is_array() || arr.size() != 4)
    throw ConfigError("sim.initial_ket must have four [re, im] amplitudes");
  Ket ket;
  for (int i = 0; i < 4; ++i) ket[i] = parse_complex(arr[i], "sim.initial_ket");
  const double norm = ket.norm();
  if (std::abs(norm - 1.0) > 1e-8)
    throw ConfigError("sim.initial_ket must be normalized (norm = " + std::to_string(norm) + ")");
  return ket;
}

// True when the per-qubit couplings are exactly the canonical decomposition
// (lambda_ad/2)(x + i y) + lambda_z z with equal vectors on both qubits.
bool scalar_lambda_form(const BathSpec& bath, double& ad, double& z) {
  const CVec3& l = bath.lambda_1;
  if ((bath.lambda_1 - bath.lambda_2).cwiseAbs().maxCoeff() != 0.0) return false;
  if (l[0].imag() != 0.0 || l[1].real() != 0.0 || l[2].imag() != 0.0) return false;
  if (l[0].real() != l[1].imag()) return false;
  ad = 2.0 * l[0].real();
  z = l[2].real();
  return true;
}

Json sim_to_json(const SimConfig& sim) {
  Json doc;
  doc["gate"] = {{"j", sim.gate.j}, {"tau", sim.gate.tau}};
  const char* mode = sim.control.mode == ControlMode::FullProtection ? "full_protection"
                     : sim.control.mode == ControlMode::DephasingOnly ? "dephasing_only"
                                                                      : "off";
  doc["control"] = {
      {"mode", mode}, {"n_x", sim.control.n_x}, {"n_z", sim.control.n_z},
      {"omega", sim.control.omega}};
  Json bath;
  bath["eta"] = sim.bath.eta;
  bath["s_exp"] = sim.bath.s_exp;
  bath["omega_c"] = sim.bath.omega_c;
  bath["temperature"] = {{"rad_per_tau", sim.bath.temperature_rad}};
  bath["topology"] = sim.bath.topology == BathTopology::Common ? "common" : "independent";
  double ad = 0.0, z = 0.0;
  if (scalar_lambda_form(sim.bath, ad, z)) {
    bath["lambda_ad"] = ad;
    bath["lambda_z"] = z;
  } else {
    bath["lambda_1"] = cvec3_to_json(sim.bath.lambda_1);
    bath["lambda_2"] = cvec3_to_json(sim.bath.lambda_2);
  }
  doc["bath"] = bath;
  const Ket psi0 = initial_pure_state(sim.rho0);
  Json ket = Json::array();
  for (int i = 0; i < 4; ++i) ket.push_back(complex_to_json(psi0[i]));
  doc["initial_ket"] = ket;
  doc["n_steps"] = sim.n_steps;
  doc["t_max"] = sim.t_max;
  doc["positivity_tol"] = sim.positivity_tol;
  doc["memory_path"] = sim.memory_path == MemoryPath::Direct ? "direct" : "separable";
  return doc;
}

SimConfig parse_sim(const Json& obj) {
  require_keys(obj,
               {"gate", "control", "bath", "initial_ket", "n_steps", "t_max", "positivity_tol",
                "memory_path"},
               "sim");
  SimConfig sim;
  if (obj.contains("gate")) sim.gate = parse_gate(obj["gate"]);
  if (obj.contains("control")) sim.control = parse_control(obj["control"]);
  if (obj.contains("bath")) sim.bath = parse_bath(obj["bath"]);
  if (obj.contains("initial_ket")) {
    const Ket ket = parse_ket(obj["initial_ket"]);
    sim.rho0 = ket * ket.adjoint();
  }
  sim.n_steps = get_int(obj, "n_steps", sim.n_steps, "sim");
  sim.t_max = get_number(obj, "t_max", sim.t_max, "sim");
  sim.positivity_tol = get_number(obj, "positivity_tol", sim.positivity_tol, "sim");
  if (obj.contains("memory_path")) {
    const std::string path = obj["memory_path"].get<std::string>();
    if (path == "direct") sim.memory_path = MemoryPath::Direct;
    else if (path == "separable") sim.memory_path = MemoryPath::Separable;
    else throw ConfigError("sim.memory_path must be direct or separable");
  }
  return sim;
}

}  // namespace

Scenario scenario_from_json(const Json& doc) {
  require_keys(doc, {"name", "sim", "sweep", "outputs"}, "scenario");
  Scenario scenario;
  if (!doc.contains("name") || !doc["name"].is_string())
    throw ConfigError("scenario: a string 'name' is required");
  scenario.name = doc["name"].get<std::string>();
  if (scenario.name.empty()) throw ConfigError("scenario: name must not be empty");
  scenario.sim = doc.contains("sim") ? parse_sim(doc["sim"]) : SimConfig();
  scenario.sim.validate();
  if (doc.contains("sweep") && !doc["sweep"].is_null()) {
    const Json& sw = doc["sweep"];
    require_keys(sw, {"path", "values"}, "sweep");
    SweepSpec spec;
    if (!sw.contains("path") || !sw["path"].is_string())
      throw ConfigError("sweep.path must be a string");
    spec.path = sw["path"].get<std::string>();
    if (!sw.contains("values") || !sw["values"].is_array() || sw["values"].empty())
      throw ConfigError("sweep.values must be a nonempty array of numbers");
    for (const auto& v : sw["values"]) {
      if (!v.is_number()) throw ConfigError("sweep.values must be numbers");
      spec.values.push_back(v.get<double>());
    }
    scenario.sweep = std::move(spec);
  }
  if (doc.contains("outputs")) {
    if (!doc["outputs"].is_array()) throw ConfigError("outputs must be an array of column names");
    for (const auto& col : doc["outputs"]) {
      const std::string name = col.get<std::string>();
      bool known = false;
      for (const auto& canon : kCanonicalOutputs) known = known || canon == name;
      if (!known) throw ConfigError("outputs: unknown metric column '" + name + "'");
      scenario.outputs.push_back(name);
    }
    if (scenario.outputs.empty()) throw ConfigError("outputs must not be empty");
  } else {
    scenario.outputs = kCanonicalOutputs;
  }

  // Rebuild the fully explicit document so manifests carry no hidden defaults.
  Json resolved;
  resolved["name"] = scenario.name;
  resolved["sim"] = sim_to_json(scenario.sim);
  if (scenario.sweep) {
    resolved["sweep"] = {{"path", scenario.sweep->path}, {"values", scenario.sweep->values}};
  } else {
    resolved["sweep"] = nullptr;
  }
  resolved["outputs"] = scenario.outputs;
  scenario.doc = std::move(resolved);
  return scenario;
}

Scenario scenario_from_json_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

namespace {

Json base_doc(const std::string& name) {
  Json doc;
  doc["name"] = name;
  doc["sim"] = sim_to_json(SimConfig());
  return doc;
}

void set_bath_case(Json& doc, const std::string& topology, double s_exp) {
  doc["sim"]["bath"]["topology"] = topology;
  doc["sim"]["bath"]["s_exp"] = s_exp;
}

Json preset_doc(const std::string& name) {
  if (name == "fig3_sweep")
    throw ConfigError(
        "preset 'fig3_sweep' expands to four scenarios; run it with the sweep command");
  if (name == "noiseless") {
    Json doc = base_doc(name);
    doc["sim"]["bath"]["eta"] = 0.0;
    return doc;
  }
  for (const char* topo : {"common", "independent"}) {
    if (name == std::string("fig1_protected_") + topo) {
      Json doc = base_doc(name);
      set_bath_case(doc, topo, 1.0);
      return doc;
    }
    for (const auto& [spectrum, s_exp] :
         std::vector<std::pair<std::string, double>>{{"ohmic", 1.0}, {"superohmic", 3.0}}) {
      if (name == "fig1_unprotected_" + spectrum + "_" + topo) {
        Json doc = base_doc(name);
        set_bath_case(doc, topo, s_exp);
        doc["sim"]["control"]["mode"] = "off";
        return doc;
      }
      if (name == "fig2_residual_" + spectrum + "_" + topo) {
        Json doc = base_doc(name);
        set_bath_case(doc, topo, s_exp);
        doc["sim"]["control"]["mode"] = "dephasing_only";
        doc["sim"]["control"]["n_z"] = 0;
        return doc;
      }
      if (name == "fig3_sweep_" + std::string(topo) + "_" + spectrum) {
        Json doc = base_doc(name);
        set_bath_case(doc, topo, s_exp);
        doc["sim"]["control"]["mode"] = "dephasing_only";
        doc["sim"]["control"]["n_z"] = 0;
        std::vector<double> values;
        for (int i = 0; i <= 10; ++i) values.push_back(i / 10.0);
        doc["sweep"] = {{"path", "sim.bath.lambda_ad"}, {"values", values}};
        return doc;
      }
    }
  }
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names = {"noiseless"};
  for (const char* topo : {"common", "independent"}) {
    names.push_back(std::string("fig1_protected_") + topo);
    for (const char* spectrum : {"ohmic", "superohmic"}) {
      names.push_back(std::string("fig1_unprotected_") + spectrum + "_" + topo);
      names.push_back(std::string("fig2_residual_") + spectrum + "_" + topo);
    }
  }
  for (const char* topo : {"common", "independent"})
    for (const char* spectrum : {"ohmic", "superohmic"})
      names.push_back(std::string("fig3_sweep_") + topo + "_" + spectrum);
  names.push_back("fig3_sweep");
  return names;
}

Scenario scenario_from_preset(const std::string& name) {
  return scenario_from_json(preset_doc(name));
}

std::vector<Scenario> expand_preset(const std::string& name) {
  if (name == "fig3_sweep") {
    std::vector<Scenario> all;
    for (const char* topo : {"common", "independent"})
      for (const char* spectrum : {"ohmic", "superohmic"})
        all.push_back(scenario_from_preset(std::string("fig3_sweep_") + topo + "_" + spectrum));
    return all;
  }
  return {scenario_from_preset(name)};
}

Scenario with_override(const Scenario& base, const std::string& dotted, const std::string& value) {
  Json doc = base.doc;
  Json* node = &doc;
  std::string rest = dotted;
  std::string leaf;
  while (true) {
    const auto pos = rest.find('.');
    const std::string key = rest.substr(0, pos);
    if (key.empty()) throw ConfigError("override: empty path segment in '" + dotted + "'");
    if (!node->is_object() || !node->contains(key))
      throw ConfigError("override: no such config field '" + dotted + "'");
    if (pos == std::string::npos) {
      leaf = key;
      break;
    }
    node = &(*node)[key];
    rest = rest.substr(pos + 1);
  }
  Json parsed;
  try {
    parsed = Json::parse(value);
  } catch (const nlohmann::json::exception&) {
    parsed = value;  // bare string, e.g. --set sim.control.mode=off
  }
  (*node)[leaf] = parsed;
  return scenario_from_json(doc);
}

namespace {

std::string trajectory_csv(const Trajectory& traj, const Scenario& scenario) {
  std::ostringstream out;
  out << "t_over_tau";
  for (const auto& col : scenario.outputs) out << ',' << col;
  out << '\n';
  const double tau = scenario.sim.gate.tau;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_double(traj.times[i] / tau);
    for (const auto& col : scenario.outputs) {
      double v = 0.0;
      if (col == "concurrence") v = traj.concurrence[i];
      else if (col == "fidelity") v = traj.fidelity[i];
      else if (col == "trace_err") v = traj.trace_error[i];
      else v = traj.min_eigenvalue[i];
      out << ',' << format_double(v);
    }
    out << '\n';
  }
  return out.str();
}

Json manifest_json(const Scenario& scenario) {
  Json manifest;
  manifest["code_version"] = kVersion;
  manifest["scenario"] = scenario.doc;
  return manifest;
}

}  // namespace

RunResult run(const Scenario& scenario, const std::string& out_dir) {
  RunResult result;
  result.trajectory = integrate(scenario.sim);
  const fs::path dir(out_dir.empty() ? "." : out_dir);
  result.csv_path = (dir / (scenario.name + ".csv")).string();
  result.manifest_path = (dir / (scenario.name + ".manifest.json")).string();
  write_file_atomic(result.csv_path, trajectory_csv(result.trajectory, scenario));
  write_file_atomic(result.manifest_path, manifest_json(scenario).dump(2) + "\n");
  return result;
}

namespace {

int thread_cap(int requested) {
  int cap = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (cap <= 0) cap = 1;
  if (const char* env = std::getenv("CDD_SIM_THREADS")) {
    const int env_cap = std::atoi(env);
    if (env_cap >= 1) cap = std::min(cap, env_cap);
  }
  return cap;
}

// A swept path can reuse one kernel table unless it changes the bath spectrum,
// temperature, or the time grid. Coupling vectors do not enter the kernels.
bool sweep_shares_kernels(const std::string& path) {
  if (path.rfind("sim.bath.lambda", 0) == 0) return true;
  if (path.rfind("sim.bath", 0) == 0) return false;
  if (path == "sim.n_steps" || path == "sim.t_max") return false;
  return true;
}

}  // namespace

SweepResult sweep(const Scenario& scenario, const std::string& out_dir, int max_threads) {
  if (!scenario.sweep) throw ConfigError("sweep: scenario '" + scenario.name + "' has no sweep block");
  const SweepSpec& spec = *scenario.sweep;

  KernelSet shared;
  const KernelSet* shared_ptr = nullptr;
  if (sweep_shares_kernels(spec.path)) {
    shared = build_kernel_table(scenario.sim.bath, scenario.sim.t_max, scenario.sim.n_steps,
                                scenario.sim.quad);
    shared_ptr = &shared;
  }

  const std::size_t n_points = spec.values.size();
  std::vector<std::optional<SweepRow>> rows(n_points);
  std::vector<std::string> failures(n_points);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_points) return;
      try {
        const Scenario point =
            with_override(scenario, spec.path, format_double(spec.values[i]));
        const Trajectory traj = integrate(point.sim, shared_ptr);
        rows[i] = SweepRow{spec.values[i], traj.concurrence.back(), traj.fidelity.back()};
      } catch (const std::exception& e) {
        failures[i] = "value=" + format_double(spec.values[i]) + ": " + e.what();
      }
    }
  };

  const int n_threads = std::min<int>(thread_cap(max_threads), static_cast<int>(n_points));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  std::ostringstream csv;
  csv << "lambda,concurrence_at_tau,fidelity_at_tau\n";
  for (std::size_t i = 0; i < n_points; ++i) {
    if (rows[i]) {
      result.rows.push_back(*rows[i]);
      csv << format_double(rows[i]->value) << ',' << format_double(rows[i]->concurrence_at_tau)
          << ',' << format_double(rows[i]->fidelity_at_tau) << '\n';
    } else {
      result.failures.push_back(failures[i]);
    }
  }

  const fs::path dir(out_dir.empty() ? "." : out_dir);
  result.csv_path = (dir / (scenario.name + "_sweep.csv")).string();
  result.manifest_path = (dir / (scenario.name + "_sweep.manifest.json")).string();
  Json manifest = manifest_json(scenario);
  manifest["failures"] = result.failures;
  write_file_atomic(result.csv_path, csv.str());
  write_file_atomic(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

// ---------------------------------------------------------------------------
// Check suite
// ---------------------------------------------------------------------------

namespace {

CheckItem check_decoupling() {
  std::mt19937 rng(20260811);
  std::uniform_int_distribution<int> pick(-20, 20);
  double worst = 0.0;
  auto residual_for = [&](int nx, int nz) {
    ControlConfig cfg;
    cfg.mode = ControlMode::FullProtection;
    cfg.n_x = nx;
    cfg.n_z = nz;
    return decoupling_residual(cfg, 256).cwiseAbs().maxCoeff();
  };
  worst = residual_for(2, 1);
  for (int trial = 0; trial < 5; ++trial) {
    int nx = 0, nz = 0;
    do {
      nx = pick(rng);
      nz = pick(rng);
    } while (nx == 0 || nz == 0 || nx == nz);
    worst = std::max(worst, residual_for(nx, nz));
  }
  return {"decoupling_residual", worst < 1e-8, "max residual " + format_double(worst)};
}

CheckItem check_kernel_closed_form(double s_exp, bool inject_fault) {
  BathSpec spec;
  spec.s_exp = s_exp;
  spec.temperature_rad = 0.0;  // closed form covers the zero-temperature part
  KernelSet table = build_kernel_table(spec, 1.0, 100);
  if (inject_fault) table.t2[table.t2.size() / 2] += Complex(1e-3, 0.0);
  double worst = 0.0;
  for (std::size_t q = 0; q < table.t2.size(); ++q) {
    const double t = q * table.dt / 2.0;
    const Complex exact = kernel_zero_temperature_closed_form(t, spec);
    worst = std::max(worst, std::abs(table.t2[q] - exact) / std::abs(exact));
  }
  const std::string name =
      s_exp == 1.0 ? "kernel_closed_form_ohmic" : "kernel_closed_form_superohmic";
  return {name, worst < 1e-6, "max relative error " + format_double(worst)};
}

CheckItem check_rotation_conjugation() {
  ControlConfig cfg;  // full protection defaults
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> time(0.0, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double t = time(rng);
    const Mat3 r = rotation_matrix(t, cfg);
    const Mat4 u = uc(t, cfg);
    for (int s = 1; s <= 2; ++s)
      for (int m = 0; m < 3; ++m) {
        Mat4 recon = Mat4::Zero();
        for (int n = 0; n < 3; ++n) recon += r(m, n) * embed(s, static_cast<Axis>(n));
        const Mat4 direct = u.adjoint() * embed(s, static_cast<Axis>(m)) * u;
        worst = std::max(worst, (recon - direct).cwiseAbs().maxCoeff());
      }
  }
  return {"rotation_matrix_conjugation", worst < 1e-10, "max entry error " + format_double(worst)};
}

CheckItem check_sigma_tilde_conjugation() {
  GateConfig gate;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = i / 49.0 * 2.0;
    const Mat4 u = u0(t, gate);
    for (int s = 1; s <= 2; ++s)
      for (int n = 0; n < 3; ++n) {
        const Mat4 closed = sigma_tilde(s, static_cast<Axis>(n), t, gate);
        const Mat4 direct = u.adjoint() * embed(s, static_cast<Axis>(n)) * u;
        worst = std::max(worst, (closed - direct).cwiseAbs().maxCoeff());
      }
  }
  return {"sigma_tilde_conjugation", worst < 1e-10, "max entry error " + format_double(worst)};
}

CheckItem check_gate_invariance() {
  GateConfig gate;
  ControlConfig control;
  const Mat4 h = h0(gate);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> time(0.0, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Mat4 u = uc(time(rng), control);
    worst = std::max(worst, (u.adjoint() * h * u - h).cwiseAbs().maxCoeff());
  }
  return {"gate_invariance", worst < 1e-12, "max entry error " + format_double(worst)};
}

CheckItem check_spectral_peak() {
  double worst_pos = 0.0, worst_val = 0.0;
  for (double s : {1.0, 3.0}) {
    BathSpec spec;
    spec.s_exp = s;
    const int n = 20000;
    const double w_hi = 10.0 * spec.omega_c;
    double best_w = 0.0, best_j = -1.0;
    for (int i = 1; i <= n; ++i) {
      const double w = w_hi * i / n;
      const double j = spectral_density(w, spec);
      if (j > best_j) {
        best_j = j;
        best_w = w;
      }
    }
    worst_pos = std::max(worst_pos, std::abs(best_w - spectral_peak_frequency(spec)) / (w_hi / n));
    worst_val =
        std::max(worst_val, std::abs(best_j - spectral_peak_value(spec)) / spectral_peak_value(spec));
  }
  // Value tolerance is loose against the grid maximum (quadratic near the peak).
  return {"spectral_density_peak", worst_pos <= 1.0 && worst_val < 1e-6,
          "argmax offset " + format_double(worst_pos) + " cells, value error " +
              format_double(worst_val)};
}

CheckItem check_noiseless_gate() {
  SimConfig cfg;
  cfg.bath.eta = 0.0;
  cfg.n_steps = 1000;
  const Trajectory traj = integrate(cfg);
  double f_err = 0.0;
  for (double f : traj.fidelity) f_err = std::max(f_err, std::abs(f - 1.0));
  const double c_err = std::abs(traj.concurrence.back() - 1.0);
  const bool ok = c_err < 1e-6 && f_err < 1e-6 && traj.max_trace_error < 1e-9;
  return {"noiseless_gate", ok,
          "concurrence error " + format_double(c_err) + ", fidelity error " + format_double(f_err) +
              ", trace error " + format_double(traj.max_trace_error)};
}

double dephasing_exponent(double t, const BathSpec& spec) {
  auto integrand = [&](double w) -> Complex {
    const double weight = spectral_density(w, spec) / std::tanh(0.5 * w / spec.temperature_rad);
    const double osc = (1.0 - std::cos(w * t)) / (w * w);
    return {4.0 * weight * osc, 0.0};
  };
  quad::QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  return quad::integrate_adaptive(integrand, 0.0, 40.0 * spec.omega_c, opts).value.real();
}

CheckItem check_pure_dephasing() {
  SimConfig cfg;
  cfg.gate.j = 0.0;
  cfg.control.mode = ControlMode::Off;
  cfg.bath.topology = BathTopology::Independent;
  cfg.bath.lambda_1 = make_lambda(0.0, 1.0);
  cfg.bath.lambda_2 = cfg.bath.lambda_1;
  cfg.n_steps = 2000;
  Ket plus_down = Ket::Zero();
  plus_down[1] = 1.0 / std::sqrt(2.0);
  plus_down[3] = 1.0 / std::sqrt(2.0);
  cfg.rho0 = plus_down * plus_down.adjoint();

  const Trajectory traj = integrate(cfg);
  double worst = 0.0;
  for (int index : {cfg.n_steps / 2, cfg.n_steps}) {
    const double t = traj.times[index];
    const double simulated = std::abs(traj.rho[index](1, 3));
    const double exact = 0.5 * std::exp(-dephasing_exponent(t, cfg.bath));
    worst = std::max(worst, std::abs(simulated - exact) / exact);
  }
  return {"pure_dephasing_decay", worst < 5e-3, "max relative error " + format_double(worst)};
}

CheckItem check_generator_structure() {
  SimConfig cfg;
  cfg.n_steps = 200;
  cfg.quad.rel_tol = 1e-9;
  const KernelSet kernels = build_kernel_table(cfg.bath, cfg.t_max, cfg.n_steps, cfg.quad);
  const CouplingTable couplings(cfg);
  DirectMemoryEngine engine(kernels, couplings);
  std::mt19937 rng(23);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst_trace = 0.0, worst_herm = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    Mat4 a;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    Mat4 rho = a * a.adjoint();
    rho /= rho.trace();
    const int q = 40 * (trial + 1);
    const MemoryConv conv = engine.at(q);
    const Mat4 l = generator(q, rho, conv, couplings, cfg);
    worst_trace = std::max(worst_trace, std::abs(l.trace()));
    worst_herm = std::max(worst_herm, (l - l.adjoint()).cwiseAbs().maxCoeff());
  }
  return {"generator_structure", worst_trace < 1e-12 && worst_herm < 1e-10,
          "max |Tr L| " + format_double(worst_trace) + ", max Hermiticity defect " +
              format_double(worst_herm)};
}

}  // namespace

bool CheckReport::all_passed() const {
  for (const auto& item : items)
    if (!item.passed) return false;
  return true;
}

Json CheckReport::to_json() const {
  Json doc;
  doc["code_version"] = kVersion;
  doc["all_passed"] = all_passed();
  Json arr = Json::array();
  for (const auto& item : items)
    arr.push_back({{"name", item.name}, {"passed", item.passed}, {"detail", item.detail}});
  doc["checks"] = arr;
  return doc;
}

CheckReport check(const CheckOptions& options) {
  CheckReport report;
  report.items.push_back(check_decoupling());
  report.items.push_back(check_kernel_closed_form(1.0, options.inject_kernel_fault));
  report.items.push_back(check_kernel_closed_form(3.0, false));
  report.items.push_back(check_rotation_conjugation());
  report.items.push_back(check_sigma_tilde_conjugation());
  report.items.push_back(check_gate_invariance());
  report.items.push_back(check_spectral_peak());
  report.items.push_back(check_generator_structure());
  report.items.push_back(check_noiseless_gate());
  report.items.push_back(check_pure_dephasing());
  return report;
}

// ---------------------------------------------------------------------------
// Plot scripts and CSV reading
// ---------------------------------------------------------------------------

namespace {

bool is_sweep_csv(const std::string& path) {
  const std::string stem = fs::path(path).stem().string();
  return stem.size() >= 6 && stem.substr(stem.size() - 6) == "_sweep";
}

std::string plot_title(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

void emit_plot_script(const std::vector<std::string>& csv_paths, const std::string& out_path) {
  if (csv_paths.empty()) throw ConfigError("plots: no input CSV files given");
  bool any_sweep = false, any_traj = false;
  for (const auto& path : csv_paths) (is_sweep_csv(path) ? any_sweep : any_traj) = true;
  if (any_sweep && any_traj)
    throw ConfigError("plots: cannot mix trajectory and sweep CSVs in one script");

  std::ostringstream out;
  out << "# gnuplot script generated by cddsim " << kVersion << "\n";
  out << "set datafile separator ','\n";
  out << "set key font ',8'\n";
  const std::string png = fs::path(out_path).stem().string() + ".png";

  if (any_sweep) {
    out << "set terminal pngcairo size 1000,420\nset output '" << png << "'\n";
    out << "set multiplot layout 1,2\n";
    const char* panels[2] = {"(a) concurrence at t = tau", "(b) fidelity at t = tau"};
    for (int panel = 0; panel < 2; ++panel) {
      out << "set title '" << panels[panel] << "'\nset xlabel 'lambda'\n";
      out << "plot ";
      for (std::size_t i = 0; i < csv_paths.size(); ++i) {
        if (i) out << ", ";
        out << "'" << csv_paths[i] << "' using 1:" << panel + 2 << " with linespoints title '"
            << plot_title(csv_paths[i]) << "'";
      }
      out << "\n";
    }
    out << "unset multiplot\n";
  } else {
    std::vector<std::string> independent, common;
    for (const auto& path : csv_paths)
      (plot_title(path).find("common") != std::string::npos ? common : independent)
          .push_back(path);
    out << "set terminal pngcairo size 1000,800\nset output '" << png << "'\n";
    out << "set multiplot layout 2,2\nset xlabel 't / tau'\n";
    struct Panel {
      const char* title;
      int column;
      const std::vector<std::string>* files;
    };
    const Panel panels[4] = {{"(a) concurrence, independent", 2, &independent},
                             {"(b) fidelity, independent", 3, &independent},
                             {"(c) concurrence, common", 2, &common},
                             {"(d) fidelity, common", 3, &common}};
    for (const auto& panel : panels) {
      out << "set title '" << panel.title << "'\nset yrange [0:1.05]\n";
      if (panel.files->empty()) {
        out << "plot 0 notitle\n";
        continue;
      }
      out << "plot ";
      for (std::size_t i = 0; i < panel.files->size(); ++i) {
        if (i) out << ", ";
        out << "'" << (*panel.files)[i] << "' using 1:" << panel.column << " with lines title '"
            << plot_title((*panel.files)[i]) << "'";
      }
      out << "\n";
    }
    out << "unset multiplot\n";
  }
  write_file_atomic(out_path, out.str());
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV file " + path);
  std::stringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw ConfigError("malformed numeric cell '" + cell + "' in " + path);
      row.push_back(v);
    }
    if (row.size() != table.header.size())
      throw ConfigError("ragged CSV row in " + path);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace cddsim
