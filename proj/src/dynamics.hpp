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

#ifndef CDDSIM_DYNAMICS_HPP
#define CDDSIM_DYNAMICS_HPP

#include <array>
#include <memory>
#include <vector>

#include "bath.hpp"
#include "control.hpp"
#include "gate.hpp"
#include "metrics.hpp"
#include "qops.hpp"

namespace cddsim {

// The evolution law is the time-local second-order Born master equation in the
// toggling+gate interaction picture,
//   d rho/dt = sum_{s,s'} Gamma^{(s,s')} {
//       [R^(s)(t), rho K1^(s')(t)] + [R^(s)dag(t), rho K2^(s')(t)]
//     + [K1^(s')dag(t) rho, R^(s)dag(t)] + [K2^(s')dag(t) rho, R^(s)(t)] },
// with filtered couplings R^(s)(t) = sum_{m,n} lambda_m R_{m,n}(t) stilde_n^(s)(t)
// and running memory convolutions
//   K1^(s')(t) = int_0^t T1(t-t') R^(s')dag(t') dt',
//   K2^(s')(t) = int_0^t T2(t-t') R^(s')(t') dt'.
// rho itself enters only at the current time, so this is an ODE whose
// generator carries operator-valued convolutions of known sampled functions.

enum class MemoryPath { Direct, Separable };

struct SimConfig {
  GateConfig gate;
  ControlConfig control;
  BathSpec bath;
  Mat4 rho0;  // default set by make_default_rho0(): |ud><ud|
  int n_steps = 4000;
  double t_max = 1.0;
  double positivity_tol = 1e-3;
  MemoryPath memory_path = MemoryPath::Direct;
  quad::QuadratureOptions quad;

  SimConfig();
  double dt() const { return t_max / n_steps; }
  void validate() const;  // throws ConfigError
};

Mat4 make_default_rho0();  // |ud><ud|
Ket initial_pure_state(const Mat4& rho0);  // dominant eigenvector; throws if rho0 is mixed

// Filtered coupling operator R^(s)(t) for qubit s (1-based). Generally
// non-Hermitian since lambda is complex.
Mat4 filtered_coupling(int qubit, double t, const SimConfig& cfg);

// R^(s) and its adjoint sampled on the half-step grid t_q = q dt/2.
class CouplingTable {
 public:
  CouplingTable(const SimConfig& cfg);

  const Mat4& value(int qubit, int q) const { return g_[qubit - 1][q]; }
  const Mat4& adjoint(int qubit, int q) const { return g_dag_[qubit - 1][q]; }
  int fine_points() const { return static_cast<int>(g_[0].size()); }
  double fine_step() const { return h_; }

 private:
  std::array<std::vector<Mat4>, 2> g_;
  std::array<std::vector<Mat4>, 2> g_dag_;
  double h_ = 0.0;
};

// Memory convolutions per source qubit (topology factor not applied).
struct MemoryConv {
  std::array<Mat4, 2> k1{Mat4::Zero(), Mat4::Zero()};
  std::array<Mat4, 2> k2{Mat4::Zero(), Mat4::Zero()};
};

// Produces K1/K2 at fine grid index q. Both engines integrate the stored
// samples with the same composite rule (Simpson pairs, a 3/8 close at odd
// endpoints, trapezoid on the lone first half step) so that they differ only
// in how the kernel itself is represented.
class MemoryEngine {
 public:
  virtual ~MemoryEngine() = default;
  virtual MemoryConv at(int q) = 0;  // queries must not decrease by more than one step
};

// O(t) per evaluation: re-walks the full history against the tabulated kernel.
class DirectMemoryEngine final : public MemoryEngine {
 public:
  DirectMemoryEngine(const KernelSet& kernels, const CouplingTable& couplings);
  MemoryConv at(int q) override;

 private:
  const KernelSet& kernels_;
  const CouplingTable& couplings_;
  bool zero_;
};

// O(1) amortized per evaluation: expands the kernel over quadrature nodes
// e^{+-i w_j t} and keeps one running accumulator per node and qubit.
class SeparableMemoryEngine final : public MemoryEngine {
 public:
  SeparableMemoryEngine(KernelExpansion expansion, const CouplingTable& couplings);
  MemoryConv at(int q) override;

 private:
  void advance_even(int target);

  KernelExpansion expansion_;
  const CouplingTable& couplings_;
  // Accumulators B_j^(s) ~ int_0^{t_q} e^{-i w_j t'} R^(s)(t') dt' at the two
  // most recent even checkpoints.
  std::vector<Mat4> b_curr_;   // per (qubit, node), at fine index even_q_
  std::vector<Mat4> b_prev2_;  // at even_q_ - 2
  int even_q_ = 0;
};

// Memory operators with the topology factor applied, indexed [s][s'] (0-based).
struct MemoryOperators {
  std::array<std::array<Mat4, 2>, 2> k1;
  std::array<std::array<Mat4, 2>, 2> k2;
};

MemoryOperators memory_operators(int grid_index, const CouplingTable& couplings,
                                 const KernelSet& kernels, const SimConfig& cfg);

// Right-hand side of the master equation at fine index q. Traceless by the
// commutator structure; Hermitian for Hermitian rho by the 1<->3 / 2<->4
// adjoint pairing.
Mat4 generator(int q, const Mat4& rho, const MemoryConv& memory, const CouplingTable& couplings,
               const SimConfig& cfg);

struct Trajectory {
  std::vector<double> times;
  std::vector<Mat4> rho;  // interaction picture
  std::vector<double> concurrence;  // of the physical-frame state
  std::vector<double> fidelity;     // <psi0| rho_I |psi0>
  std::vector<double> trace_error;
  std::vector<double> min_eigenvalue;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  int positivity_warnings = 0;

  std::size_t size() const { return times.size(); }
};

// Classic fixed-step fourth-order integration on the uniform grid. Aborts
// (SimulationError) if the trace drifts beyond 1e-6 or Hermiticity beyond
// 1e-8; positivity violations beyond cfg.positivity_tol are counted, not fatal.
// A prebuilt kernel table for the same bath/grid may be shared across runs.
Trajectory integrate(const SimConfig& cfg, const KernelSet* shared_kernels = nullptr);

// Back to the physical frame: U_c(t) U0(t) rho_I U0^dag(t) U_c^dag(t).
Mat4 to_physical(const Mat4& rho_interaction, double t, const SimConfig& cfg);

}  // namespace cddsim

#endif
