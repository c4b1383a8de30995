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

#include "control.hpp"

#include <cmath>

#include "errors.hpp"
#include "quadrature.hpp"

namespace cddsim {

void ControlConfig::validate() const {
  if (mode == ControlMode::Off) return;
  if (omega <= 0.0) throw ConfigError("control: omega must be positive");
  if (n_x == 0) throw ConfigError("control: n_x must be a nonzero integer");
  if (mode == ControlMode::FullProtection) {
    if (n_z == 0) throw ConfigError("control: full protection requires nonzero n_z");
    if (n_z == n_x) throw ConfigError("control: full protection requires n_x != n_z");
  } else if (mode == ControlMode::DephasingOnly && n_z != 0) {
    throw ConfigError("control: dephasing-only mode requires n_z = 0");
  }
}

Vec3 omega_field(double t, const ControlConfig& cfg) {
  switch (cfg.mode) {
    case ControlMode::Off:
      return Vec3::Zero();
    case ControlMode::DephasingOnly:
      return {cfg.n_x * cfg.omega, 0.0, 0.0};
    case ControlMode::FullProtection: {
      const double phase = cfg.n_x * cfg.omega * t;
      return {cfg.n_x * cfg.omega, -cfg.n_z * cfg.omega * std::sin(phase),
              cfg.n_z * cfg.omega * std::cos(phase)};
    }
  }
  return Vec3::Zero();
}

Mat2 uc_single(double t, const ControlConfig& cfg) {
  if (cfg.mode == ControlMode::Off) return Mat2::Identity();
  const double ax = cfg.omega * t * cfg.n_x;
  const double az = cfg.omega * t * (cfg.mode == ControlMode::DephasingOnly ? 0 : cfg.n_z);
  // exp(-i ax sx) = cos(ax) - i sin(ax) sx; exp(-i az sz) = diag(e^{-i az}, e^{i az}).
  Mat2 ux;
  ux << std::cos(ax), -kImag * std::sin(ax), -kImag * std::sin(ax), std::cos(ax);
  Mat2 uz = Mat2::Zero();
  uz(0, 0) = std::exp(-kImag * az);
  uz(1, 1) = std::exp(kImag * az);
  return ux * uz;
}

Mat4 uc(double t, const ControlConfig& cfg) {
  const Mat2 u = uc_single(t, cfg);
  return kron(u, u);
}

namespace {

Mat3 rot_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

Mat3 rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

}  // namespace

Mat3 rotation_matrix(double t, const ControlConfig& cfg) {
  if (cfg.mode == ControlMode::Off) return Mat3::Identity();
  const int nz = cfg.mode == ControlMode::DephasingOnly ? 0 : cfg.n_z;
  // Adjoint action of the ordered propagator: conjugation by exp(-i a sx) on
  // the Pauli vector is Rx(2a), and the z factor acts first from the inside.
  return rot_x(2.0 * cfg.n_x * cfg.omega * t) * rot_z(2.0 * nz * cfg.omega * t);
}

Mat3 decoupling_residual(const ControlConfig& cfg, int quad_points) {
  if (quad_points < 64) throw ConfigError("decoupling_residual: quad_points must be >= 64");
  if (cfg.mode == ControlMode::Off) return Mat3::Identity();
  const double tc = cfg.cycle_time();
  constexpr int kOrder = 16;
  // Enough panels to resolve the fastest harmonic 2(|n_x| + |n_z|) w.
  const int panels =
      std::max((quad_points + kOrder - 1) / kOrder, 2 * (std::abs(cfg.n_x) + std::abs(cfg.n_z)) + 4);
  const auto& gl = quad::GaussLegendre::rule(kOrder);
  Mat3 acc = Mat3::Zero();
  for (int p = 0; p < panels; ++p) {
    const double a = tc * p / panels;
    const double b = tc * (p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < kOrder; ++i)
      acc += (half * gl.weights[i]) * rotation_matrix(mid + half * gl.nodes[i], cfg);
  }
  return acc / tc;
}

}  // namespace cddsim
