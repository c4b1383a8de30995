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

#include <random>

#include "doctest.h"
#include "errors.hpp"
#include "gate.hpp"
#include "support/oracles.hpp"

using namespace cddsim;

namespace {

ControlConfig full_cfg(int nx = 14, int nz = 7) {
  ControlConfig cfg;
  cfg.mode = ControlMode::FullProtection;
  cfg.n_x = nx;
  cfg.n_z = nz;
  return cfg;
}

}  // namespace

TEST_CASE("drive field components and constant magnitude") {
  const ControlConfig cfg = full_cfg();
  const Vec3 at0 = omega_field(0.0, cfg);
  CHECK(at0[0] == doctest::Approx(cfg.n_x * cfg.omega));
  CHECK(at0[1] == doctest::Approx(0.0));
  CHECK(at0[2] == doctest::Approx(cfg.n_z * cfg.omega));

  ControlConfig dephasing = cfg;
  dephasing.mode = ControlMode::DephasingOnly;
  dephasing.n_z = 0;
  for (double t : {0.0, 0.3, 1.7})
    CHECK((omega_field(t, dephasing) - Vec3(dephasing.n_x * dephasing.omega, 0, 0)).norm() <
          1e-12);

  ControlConfig off = cfg;
  off.mode = ControlMode::Off;
  CHECK(omega_field(0.4, off).norm() == 0.0);

  const double expected = std::hypot(cfg.n_x, cfg.n_z) * cfg.omega;
  std::uniform_real_distribution<double> time(0.0, 2.0);
  for (int trial = 0; trial < 25; ++trial)
    CHECK(omega_field(time(oracles::rng()), cfg).norm() == doctest::Approx(expected));
}

TEST_CASE("single-qubit control propagator") {
  const ControlConfig cfg = full_cfg();
  CHECK((uc_single(0.0, cfg) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  // After one cycle both exponent angles are whole multiples of 2 pi and the
  // Pauli eigenvalues are +-1, so each factor is exactly the identity.
  const double tc = cfg.cycle_time();
  CHECK((uc_single(tc, cfg) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((uc_single(3.0 * tc, cfg) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-11);

  ControlConfig off = cfg;
  off.mode = ControlMode::Off;
  CHECK((uc_single(1.234, off) - Mat2::Identity()).cwiseAbs().maxCoeff() == 0.0);

  std::uniform_real_distribution<double> time(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = time(oracles::rng());
    const Mat2 u = uc_single(t, cfg);
    CHECK((u * u.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    // Matches the spectral-decomposition route.
    const Mat2 ref = expm_hermitian(pauli(Axis::X), cfg.omega * t * cfg.n_x) *
                     expm_hermitian(pauli(Axis::Z), cfg.omega * t * cfg.n_z);
    CHECK((u - ref).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("two-qubit control propagator and gate invariance") {
  const ControlConfig cfg = full_cfg();
  CHECK((uc(0.0, cfg) - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  const GateConfig gate;
  const Mat4 h = h0(gate);
  std::uniform_real_distribution<double> time(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = time(oracles::rng());
    const Mat4 u = uc(t, cfg);
    CHECK((u * u.adjoint() - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((u.adjoint() * h * u - h).cwiseAbs().maxCoeff() < 1e-12);
    // The two single-qubit factors commute.
    const Mat4 u1 = kron(uc_single(t, cfg), Mat2::Identity());
    const Mat4 u2 = kron(Mat2::Identity(), uc_single(t, cfg));
    CHECK((u1 * u2 - u2 * u1).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((u - u2 * u1).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("toggling-frame rotation matrix against explicit conjugation") {
  const ControlConfig cfg = full_cfg();
  CHECK((rotation_matrix(0.0, cfg) - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  ControlConfig off = cfg;
  off.mode = ControlMode::Off;
  CHECK((rotation_matrix(2.1, off) - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);

  const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
  std::uniform_real_distribution<double> time(0.0, 2.5);
  const double tc = cfg.cycle_time();
  for (int trial = 0; trial < 25; ++trial) {
    const double t = time(oracles::rng());
    const Mat3 r = rotation_matrix(t, cfg);
    CHECK((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((rotation_matrix(t + tc, cfg) - r).cwiseAbs().maxCoeff() < 1e-10);

    const Mat4 u = uc(t, cfg);
    for (int s : {1, 2})
      for (int m = 0; m < 3; ++m) {
        Mat4 reconstructed = Mat4::Zero();
        for (int n = 0; n < 3; ++n) reconstructed += r(m, n) * embed(s, axes[n]);
        const Mat4 direct = u.adjoint() * embed(s, axes[m]) * u;
        CHECK((reconstructed - direct).cwiseAbs().maxCoeff() < 1e-10);
      }
  }
}

TEST_CASE("cycle-averaged rotation vanishes under full protection") {
  CHECK(decoupling_residual(full_cfg(2, 1), 256).cwiseAbs().maxCoeff() < 1e-8);

  ControlConfig off;
  off.mode = ControlMode::Off;
  CHECK((decoupling_residual(off, 256) - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);

  std::uniform_int_distribution<int> pick(-12, 12);
  for (int trial = 0; trial < 5; ++trial) {
    int nx = 0, nz = 0;
    do {
      nx = pick(oracles::rng());
      nz = pick(oracles::rng());
    } while (nx == 0 || nz == 0 || nx == nz);
    CHECK(decoupling_residual(full_cfg(nx, nz), 256).cwiseAbs().maxCoeff() < 1e-8);
  }

  CHECK_THROWS_AS(decoupling_residual(full_cfg(), 32), ConfigError);
}

TEST_CASE("dephasing-only drive averages out z couplings but not x") {
  ControlConfig cfg;
  cfg.mode = ControlMode::DephasingOnly;
  cfg.n_x = 1;
  cfg.n_z = 0;
  const Mat3 residual = decoupling_residual(cfg, 256);

  // Coupling vectors contract rows: lambda // z sees a vanishing residual,
  // lambda // x keeps the full static component.
  const Vec3 z_row = residual.row(2);
  const Vec3 x_row = residual.row(0);
  CHECK(z_row.norm() < 1e-8);
  CHECK(x_row.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(residual.row(1).norm() < 1e-8);
}

TEST_CASE("control config validation") {
  CHECK_THROWS_AS(full_cfg(0, 1).validate(), ConfigError);
  CHECK_THROWS_AS(full_cfg(3, 0).validate(), ConfigError);
  CHECK_THROWS_AS(full_cfg(3, 3).validate(), ConfigError);
  ControlConfig dephasing;
  dephasing.mode = ControlMode::DephasingOnly;
  dephasing.n_z = 7;
  CHECK_THROWS_AS(dephasing.validate(), ConfigError);
  dephasing.n_z = 0;
  CHECK_NOTHROW(dephasing.validate());
  ControlConfig off;
  off.mode = ControlMode::Off;
  CHECK_NOTHROW(off.validate());
}
