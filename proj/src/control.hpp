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

#ifndef CDDSIM_CONTROL_HPP
#define CDDSIM_CONTROL_HPP

#include "constants.hpp"
#include "qops.hpp"

namespace cddsim {

// Continuous decoupling drive: a static field along x plus a field rotating in
// the yz plane,
//   Omega(t) = x n_x w + n_z w [z cos(n_x w t) - y sin(n_x w t)],
// whose single-qubit propagator is the ordered product
//   U(t) = exp(-i w t n_x sigma_x) exp(-i w t n_z sigma_z).
// One control cycle lasts t_c = 2 pi / w.

enum class ControlMode {
  FullProtection,  // n_x, n_z nonzero and distinct: averages out every coupling axis
  DephasingOnly,   // n_z = 0: static x field, averages out sigma_y/sigma_z couplings
  Off,
};

struct ControlConfig {
  ControlMode mode = ControlMode::FullProtection;
  int n_x = 14;
  int n_z = 7;
  double omega = 2.0 * constants::pi;

  double cycle_time() const { return 2.0 * constants::pi / omega; }
  void validate() const;  // throws ConfigError
};

// Drive field Omega(t) in rad per time unit.
Vec3 omega_field(double t, const ControlConfig& cfg);

// Single-qubit control propagator U^(s)(t); identical for both qubits.
Mat2 uc_single(double t, const ControlConfig& cfg);

// Two-qubit control propagator U_c(t) = U^(2)(t) U^(1)(t).
Mat4 uc(double t, const ControlConfig& cfg);

// Toggling-frame rotation R(t) defined by
//   U_c^dag(t) sigma_m U_c(t) = sum_n R_{m,n}(t) sigma_n.
// Computed in closed form as Rx(2 n_x w t) Rz(2 n_z w t); element of SO(3).
Mat3 rotation_matrix(double t, const ControlConfig& cfg);

// Cycle average (1/t_c) int_0^{t_c} R(t) dt by composite Gauss-Legendre.
// Vanishes entirely in full protection; in dephasing-only mode the sigma_y and
// sigma_z coupling rows vanish while the static sigma_x row survives.
Mat3 decoupling_residual(const ControlConfig& cfg, int quad_points = 256);

}  // namespace cddsim

#endif
