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

#include "metrics.hpp"

#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "support/oracles.hpp"

using namespace cddsim;

TEST_CASE("concurrence of basic states") {
  Ket ud = Ket::Zero();
  ud[1] = 1.0;
  CHECK(concurrence(ud * ud.adjoint()) == doctest::Approx(0.0).epsilon(1e-12));

  Ket bell = Ket::Zero();
  bell[1] = 1.0 / std::sqrt(2.0);
  bell[2] = 1.0 / std::sqrt(2.0);
  CHECK(concurrence(bell * bell.adjoint()) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Werner states against the closed form") {
  Ket phi_plus = Ket::Zero();
  phi_plus[0] = 1.0 / std::sqrt(2.0);
  phi_plus[3] = 1.0 / std::sqrt(2.0);
  const Mat4 pure = phi_plus * phi_plus.adjoint();
  for (double p : {0.8, 1.0 / 3.0, 0.5, 0.2, 0.95}) {
    const Mat4 werner = p * pure + (1.0 - p) * Mat4::Identity() / 4.0;
    const double expected = std::max(0.0, (3.0 * p - 1.0) / 2.0);
    CHECK(concurrence(werner) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("concurrence is invariant under local unitaries and zero on products") {
  auto& gen = oracles::rng();
  for (int trial = 0; trial < 20; ++trial) {
    const Mat4 rho = oracles::random_density(gen);
    const Mat4 local = kron(oracles::random_unitary_2(gen), oracles::random_unitary_2(gen));
    const double direct = concurrence(rho);
    const double rotated = concurrence(local * rho * local.adjoint());
    CHECK(std::abs(direct - rotated) < 1e-9);
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector2cd a, b;
    for (int i = 0; i < 2; ++i) {
      a[i] = Complex(gauss(gen), gauss(gen));
      b[i] = Complex(gauss(gen), gauss(gen));
    }
    a.normalize();
    b.normalize();
    Ket product;
    product << a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1];
    CHECK(concurrence(product * product.adjoint()) < 1e-9);
  }

  Mat4 not_hermitian = oracles::random_density(gen);
  not_hermitian(0, 2) += Complex(0.0, 1e-3);
  CHECK_THROWS_AS(concurrence(not_hermitian), SimulationError);
}

TEST_CASE("fidelity: overlap convention and bounds") {
  auto& gen = oracles::rng();
  const Ket psi = oracles::random_ket(gen);
  CHECK(fidelity(psi * psi.adjoint(), psi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(Mat4::Identity() / 4.0, psi) == doctest::Approx(0.25).epsilon(1e-12));

  // Linear in rho.
  const Mat4 rho1 = oracles::random_density(gen);
  const Mat4 rho2 = oracles::random_density(gen);
  const double mix = fidelity(0.3 * rho1 + 0.7 * rho2, psi);
  CHECK(mix == doctest::Approx(0.3 * fidelity(rho1, psi) + 0.7 * fidelity(rho2, psi))
                   .epsilon(1e-12));
  for (int trial = 0; trial < 10; ++trial) {
    const double f = fidelity(oracles::random_density(gen), psi);
    CHECK(f >= -1e-12);
    CHECK(f <= 1.0 + 1e-12);
  }

  Ket unnormalized = 1.2 * psi;
  CHECK_THROWS_AS(fidelity(rho1, unnormalized), ConfigError);
}

TEST_CASE("metric clamping tolerates roundoff only") {
  CHECK(clamp_metric(1.0 + 5e-7, "test") == 1.0);
  CHECK(clamp_metric(-5e-7, "test") == 0.0);
  CHECK(clamp_metric(0.5, "test") == 0.5);
  CHECK_THROWS_AS(clamp_metric(1.01, "test"), SimulationError);
  CHECK_THROWS_AS(clamp_metric(-0.01, "test"), SimulationError);
}
