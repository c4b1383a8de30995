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

#include "dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace cddsim {

SimConfig::SimConfig() : rho0(make_default_rho0()) {}

Mat4 make_default_rho0() {
  Ket up_down = Ket::Zero();
  up_down[1] = 1.0;
  return up_down * up_down.adjoint();
}

Ket initial_pure_state(const Mat4& rho0) {
  const double purity = (rho0 * rho0).trace().real();
  if (std::abs(purity - 1.0) > 1e-8)
    throw ConfigError("initial state must be pure to define the fidelity (Tr rho^2 = " +
                      std::to_string(purity) + ")");
  Eigen::SelfAdjointEigenSolver<Mat4> es(rho0);
  return es.eigenvectors().col(3).normalized();  // eigenvalues ascending
}

void SimConfig::validate() const {
  gate.validate();
  control.validate();
  bath.validate();
  if (t_max <= 0.0) throw ConfigError("sim: t_max must be positive");
  if (positivity_tol <= 0.0) throw ConfigError("sim: positivity_tol must be positive");
  if (n_steps < 100) throw ConfigError("sim: n_steps must be >= 100");
  if (control.mode != ControlMode::Off) {
    const int fastest =
        std::max({std::abs(control.n_x),
                  control.mode == ControlMode::FullProtection ? std::abs(control.n_z) : 0, 1});
    const int required =
        static_cast<int>(std::ceil(10.0 * fastest * control.omega * t_max / (2.0 * constants::pi)));
    if (n_steps < required)
      throw ConfigError("sim: n_steps = " + std::to_string(n_steps) +
                        " cannot resolve the control oscillation; need >= " +
                        std::to_string(required));
  }
  const DensityReport report = check_density(rho0);
  if (report.hermiticity_error > 1e-10)
    throw ConfigError("sim: rho0 is not Hermitian");
  if (report.trace_error > 1e-8) throw ConfigError("sim: rho0 trace differs from 1");
  if (report.min_eigenvalue < -positivity_tol)
    throw ConfigError("sim: rho0 has a negative eigenvalue beyond tolerance");
}

Mat4 filtered_coupling(int qubit, double t, const SimConfig& cfg) {
  const Mat3 r = rotation_matrix(t, cfg.control);
  const CVec3& lambda = cfg.bath.lambda(qubit);
  Mat4 out = Mat4::Zero();
  for (int n = 0; n < 3; ++n) {
    Complex v{0.0, 0.0};
    for (int m = 0; m < 3; ++m) v += lambda[m] * r(m, n);
    out += v * sigma_tilde(qubit, static_cast<Axis>(n), t, cfg.gate);
  }
  return out;
}

CouplingTable::CouplingTable(const SimConfig& cfg) {
  const int fine_points = 2 * cfg.n_steps + 1;
  h_ = cfg.dt() / 2.0;
  for (int s = 0; s < 2; ++s) {
    g_[s].resize(fine_points);
    g_dag_[s].resize(fine_points);
  }
  for (int q = 0; q < fine_points; ++q) {
    const double t = q * h_;
    for (int s = 1; s <= 2; ++s) {
      g_[s - 1][q] = filtered_coupling(s, t, cfg);
      g_dag_[s - 1][q] = g_[s - 1][q].adjoint();
    }
  }
}

namespace {

// Composite weights for int_0^{qh} p(t') dt' over samples p_0..p_q: Simpson
// pairs, closed with a 3/8 rule when q is odd, trapezoid on the lone first
// half step (q = 1).
double conv_weight(int i, int q, double h) {
  if (q == 1) return 0.5 * h;
  if (q % 2 == 0) {
    if (i == 0 || i == q) return h / 3.0;
    return (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
  }
  const int m = q - 3;  // Simpson part covers [0, m]; 3/8 covers [m, q]
  double w = 0.0;
  if (m > 0) {
    if (i == 0) w += h / 3.0;
    else if (i < m) w += (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
    else if (i == m) w += h / 3.0;
  }
  if (i == m) w += 3.0 * h / 8.0;
  else if (i == m + 1 || i == m + 2) w += 9.0 * h / 8.0;
  else if (i == q) w += 3.0 * h / 8.0;
  return w;
}

}  // namespace

DirectMemoryEngine::DirectMemoryEngine(const KernelSet& kernels, const CouplingTable& couplings)
    : kernels_(kernels), couplings_(couplings), zero_(kernels.all_zero()) {}

MemoryConv DirectMemoryEngine::at(int q) {
  MemoryConv out;
  if (zero_ || q == 0) return out;
  const double h = couplings_.fine_step();
  for (int i = 0; i <= q; ++i) {
    const double w = conv_weight(i, q, h);
    const Complex c1 = w * kernels_.t1_fine(q - i);
    const Complex c2 = w * kernels_.t2_fine(q - i);
    for (int sp = 0; sp < 2; ++sp) {
      out.k1[sp].noalias() += c1 * couplings_.adjoint(sp + 1, i);
      out.k2[sp].noalias() += c2 * couplings_.value(sp + 1, i);
    }
  }
  return out;
}

SeparableMemoryEngine::SeparableMemoryEngine(KernelExpansion expansion,
                                             const CouplingTable& couplings)
    : expansion_(std::move(expansion)), couplings_(couplings) {
  const std::size_t n = 2 * expansion_.nodes.size();
  b_curr_.assign(n, Mat4::Zero());
  b_prev2_.assign(n, Mat4::Zero());
}

void SeparableMemoryEngine::advance_even(int target) {
  if (target < even_q_)
    throw std::logic_error("SeparableMemoryEngine: queries must not rewind");
  const double h = couplings_.fine_step();
  const std::size_t n_nodes = expansion_.nodes.size();
  while (even_q_ < target) {
    const int q0 = even_q_;
    for (std::size_t j = 0; j < n_nodes; ++j) {
      const double w = expansion_.nodes[j];
      const Complex p0 = std::polar(1.0, -w * (q0 * h));
      const Complex p1 = std::polar(1.0, -w * ((q0 + 1) * h));
      const Complex p2 = std::polar(1.0, -w * ((q0 + 2) * h));
      for (int sp = 0; sp < 2; ++sp) {
        Mat4& curr = b_curr_[sp * n_nodes + j];
        Mat4& prev2 = b_prev2_[sp * n_nodes + j];
        Mat4 panel = (h / 3.0) * (p0 * couplings_.value(sp + 1, q0) +
                                  4.0 * p1 * couplings_.value(sp + 1, q0 + 1) +
                                  p2 * couplings_.value(sp + 1, q0 + 2));
        prev2 = curr;
        curr += panel;
      }
    }
    even_q_ += 2;
  }
}

MemoryConv SeparableMemoryEngine::at(int q) {
  MemoryConv out;
  if (expansion_.nodes.empty() || q == 0) return out;
  const double h = couplings_.fine_step();
  const std::size_t n_nodes = expansion_.nodes.size();
  const double t_q = q * h;

  auto assemble = [&](int sp, std::size_t j, const Mat4& b) {
    const double w = expansion_.nodes[j];
    out.k1[sp].noalias() +=
        (expansion_.c1[j] * std::polar(1.0, -w * t_q)) * b.adjoint();
    out.k2[sp].noalias() += (expansion_.c2[j] * std::polar(1.0, w * t_q)) * b;
  };

  if (q % 2 == 0) {
    advance_even(q);
    for (std::size_t j = 0; j < n_nodes; ++j)
      for (int sp = 0; sp < 2; ++sp) assemble(sp, j, b_curr_[sp * n_nodes + j]);
    return out;
  }
  if (q == 1) {
    for (std::size_t j = 0; j < n_nodes; ++j) {
      const double w = expansion_.nodes[j];
      const Complex p0 = std::polar(1.0, 0.0);
      const Complex p1 = std::polar(1.0, -w * h);
      for (int sp = 0; sp < 2; ++sp) {
        const Mat4 b = (h / 2.0) * (p0 * couplings_.value(sp + 1, 0) +
                                    p1 * couplings_.value(sp + 1, 1));
        assemble(sp, j, b);
      }
    }
    return out;
  }
  advance_even(q - 1);  // leaves b_prev2_ at q - 3
  for (std::size_t j = 0; j < n_nodes; ++j) {
    const double w = expansion_.nodes[j];
    const Complex p0 = std::polar(1.0, -w * ((q - 3) * h));
    const Complex p1 = std::polar(1.0, -w * ((q - 2) * h));
    const Complex p2 = std::polar(1.0, -w * ((q - 1) * h));
    const Complex p3 = std::polar(1.0, -w * (q * h));
    for (int sp = 0; sp < 2; ++sp) {
      Mat4 b = b_prev2_[sp * n_nodes + j];
      b.noalias() += (3.0 * h / 8.0) * (p0 * couplings_.value(sp + 1, q - 3) +
                                        3.0 * p1 * couplings_.value(sp + 1, q - 2) +
                                        3.0 * p2 * couplings_.value(sp + 1, q - 1) +
                                        p3 * couplings_.value(sp + 1, q));
      assemble(sp, j, b);
    }
  }
  return out;
}

MemoryOperators memory_operators(int grid_index, const CouplingTable& couplings,
                                 const KernelSet& kernels, const SimConfig& cfg) {
  if (2 * grid_index >= couplings.fine_points())
    throw ConfigError("memory_operators: grid index beyond stored history");
  DirectMemoryEngine engine(kernels, couplings);
  const MemoryConv conv = engine.at(2 * grid_index);
  MemoryOperators out;
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp) {
      const double g = gamma_factor(s + 1, sp + 1, cfg.bath);
      out.k1[s][sp] = g * conv.k1[sp];
      out.k2[s][sp] = g * conv.k2[sp];
    }
  return out;
}

Mat4 generator(int q, const Mat4& rho, const MemoryConv& memory, const CouplingTable& couplings,
               const SimConfig& cfg) {
  Mat4 l = Mat4::Zero();
  for (int s = 1; s <= 2; ++s) {
    Mat4 m1 = Mat4::Zero(), m2 = Mat4::Zero();
    for (int sp = 1; sp <= 2; ++sp) {
      const double g = gamma_factor(s, sp, cfg.bath);
      if (g == 0.0) continue;
      m1 += g * memory.k1[sp - 1];
      m2 += g * memory.k2[sp - 1];
    }
    const Mat4& r = couplings.value(s, q);
    const Mat4& r_dag = couplings.adjoint(s, q);
    const Mat4 rho_m1 = rho * m1;
    const Mat4 rho_m2 = rho * m2;
    const Mat4 m1d_rho = m1.adjoint() * rho;
    const Mat4 m2d_rho = m2.adjoint() * rho;
    l.noalias() += r * rho_m1 - rho_m1 * r;
    l.noalias() += r_dag * rho_m2 - rho_m2 * r_dag;
    l.noalias() += m1d_rho * r_dag - r_dag * m1d_rho;
    l.noalias() += m2d_rho * r - r * m2d_rho;
  }
  return l;
}

namespace {

struct FrameCache {
  // U0(t) from the fixed eigenbasis of h0; uc is cheap in closed form.
  Eigen::SelfAdjointEigenSolver<Mat4> es;
  explicit FrameCache(const GateConfig& gate) : es(h0(gate)) {}
  Mat4 u0_at(double t) const {
    Ket phases;
    for (int k = 0; k < 4; ++k) phases[k] = std::exp(-kImag * es.eigenvalues()[k] * t);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
};

}  // namespace

Trajectory integrate(const SimConfig& cfg, const KernelSet* shared_kernels) {
  cfg.validate();
  const double dt = cfg.dt();

  KernelSet local_kernels;
  const KernelSet* kernels = shared_kernels;
  if (kernels != nullptr) {
    if (kernels->n_steps != cfg.n_steps || std::abs(kernels->dt - dt) > 1e-15 * (1.0 + dt))
      throw ConfigError("integrate: shared kernel table does not match the grid");
  } else {
    local_kernels = build_kernel_table(cfg.bath, cfg.t_max, cfg.n_steps, cfg.quad);
    kernels = &local_kernels;
  }

  const Ket psi0 = initial_pure_state(cfg.rho0);
  const CouplingTable couplings(cfg);

  std::unique_ptr<MemoryEngine> engine;
  if (cfg.memory_path == MemoryPath::Direct)
    engine = std::make_unique<DirectMemoryEngine>(*kernels, couplings);
  else
    engine = std::make_unique<SeparableMemoryEngine>(build_kernel_expansion(cfg.bath, cfg.t_max),
                                                     couplings);

  const FrameCache frame(cfg.gate);
  const ControlConfig& control = cfg.control;

  Trajectory traj;
  const int n = cfg.n_steps;
  traj.times.reserve(n + 1);
  traj.rho.reserve(n + 1);

  auto record = [&](int index, const Mat4& rho) {
    const double t = index * dt;
    const double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (trace_err > 1e-6)
      throw SimulationError("integrator invariant breach: |Tr rho - 1| = " +
                            std::to_string(trace_err) + " at t = " + std::to_string(t));
    const double herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > 1e-8)
      throw SimulationError("integrator invariant breach: Hermiticity error " +
                            std::to_string(herm_err) + " at t = " + std::to_string(t));
    Eigen::SelfAdjointEigenSolver<Mat4> es((rho + rho.adjoint()) / 2.0);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -cfg.positivity_tol) ++traj.positivity_warnings;

    const Mat4 physical = uc(t, control) * frame.u0_at(t) * rho *
                          frame.u0_at(t).adjoint() * uc(t, control).adjoint();
    traj.times.push_back(t);
    traj.rho.push_back(rho);
    traj.concurrence.push_back(clamp_metric(concurrence(physical), "concurrence"));
    traj.fidelity.push_back(clamp_metric(fidelity(rho, psi0), "fidelity"));
    traj.trace_error.push_back(trace_err);
    traj.min_eigenvalue.push_back(min_eig);
    traj.max_trace_error = std::max(traj.max_trace_error, trace_err);
    traj.max_hermiticity_error = std::max(traj.max_hermiticity_error, herm_err);
  };

  Mat4 rho = cfg.rho0;
  record(0, rho);
  MemoryConv conv_lo = engine->at(0);
  for (int k = 0; k < n; ++k) {
    const MemoryConv conv_mid = engine->at(2 * k + 1);
    const MemoryConv conv_hi = engine->at(2 * k + 2);
    const Mat4 k1 = generator(2 * k, rho, conv_lo, couplings, cfg);
    const Mat4 k2 = generator(2 * k + 1, Mat4(rho + 0.5 * dt * k1), conv_mid, couplings, cfg);
    const Mat4 k3 = generator(2 * k + 1, Mat4(rho + 0.5 * dt * k2), conv_mid, couplings, cfg);
    const Mat4 k4 = generator(2 * k + 2, Mat4(rho + dt * k3), conv_hi, couplings, cfg);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    conv_lo = conv_hi;
    record(k + 1, rho);
  }
  return traj;
}

Mat4 to_physical(const Mat4& rho_interaction, double t, const SimConfig& cfg) {
  const Mat4 u = uc(t, cfg.control) * u0(t, cfg.gate);
  return u * rho_interaction * u.adjoint();
}

}  // namespace cddsim
