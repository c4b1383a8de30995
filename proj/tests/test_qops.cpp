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

#include "qops.hpp"

#include <algorithm>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace cddsim;

namespace {
const Axis kAxes[3] = {Axis::X, Axis::Y, Axis::Z};
}

TEST_CASE("pauli matrices: definitions and algebra") {
  CHECK((pauli(Axis::Z) - Mat2(Eigen::Vector2cd(1.0, -1.0).asDiagonal())).norm() == 0.0);
  CHECK((pauli(Axis::X) * pauli(Axis::Y) - kImag * pauli(Axis::Z)).norm() < 1e-15);

  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) {
      const Complex tr = (pauli(kAxes[m]) * pauli(kAxes[n])).trace();
      CHECK(std::abs(tr - Complex(m == n ? 2.0 : 0.0)) < 1e-15);

      // sigma_m sigma_n = delta_mn I + i eps_mnk sigma_k
      Mat2 expected = Mat2::Zero();
      if (m == n) expected = Mat2::Identity();
      else {
        const int k = 3 - m - n;
        const double eps = ((n - m + 3) % 3 == 1) ? 1.0 : -1.0;
        expected = kImag * eps * pauli(kAxes[k]);
      }
      CHECK((pauli(kAxes[m]) * pauli(kAxes[n]) - expected).cwiseAbs().maxCoeff() < 1e-15);
    }

  for (Axis a : kAxes) {
    CHECK((pauli(a) * pauli(a).adjoint() - Mat2::Identity()).norm() < 1e-15);  // unitary
    CHECK((pauli(a) - pauli(a).adjoint()).norm() == 0.0);                      // Hermitian
    CHECK(std::abs(pauli(a).trace()) == 0.0);                                  // traceless
  }
}

TEST_CASE("embed places operators on the right tensor factor") {
  // Basis order {uu, ud, du, dd}: |ud> is index 1.
  Ket ud = Ket::Zero();
  ud[1] = 1.0;
  CHECK((embed(1, Axis::Z) * ud - ud).norm() < 1e-15);
  CHECK((embed(2, Axis::Z) * ud + ud).norm() < 1e-15);

  for (Axis a : kAxes)
    for (Axis b : kAxes)
      CHECK(commutator(embed(1, a), embed(2, b)).cwiseAbs().maxCoeff() < 1e-15);

  // Same Pauli algebra within each qubit.
  for (int s : {1, 2})
    for (int m = 0; m < 3; ++m) {
      const int n = (m + 1) % 3, k = (m + 2) % 3;
      CHECK((embed(s, kAxes[m]) * embed(s, kAxes[n]) - kImag * embed(s, kAxes[k]))
                .cwiseAbs()
                .maxCoeff() < 1e-15);
    }

  CHECK((embed(1, Axis::X) - oracles::kron_reference(pauli(Axis::X), Mat2::Identity()))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  CHECK_THROWS_AS(embed(0, Axis::X), std::invalid_argument);
  CHECK_THROWS_AS(embed(3, Axis::X), std::invalid_argument);
}

TEST_CASE("exchange operator spectrum from independent construction") {
  // sum_m sigma_m x sigma_m built with the reference kron, diagonalized
  // numerically: eigenvalues {1, 1, 1, -3}.
  Mat4 dot = Mat4::Zero();
  for (Axis a : kAxes) dot += oracles::kron_reference(pauli(a), pauli(a));
  Eigen::SelfAdjointEigenSolver<Mat4> es(dot);
  CHECK(es.eigenvalues()[0] == doctest::Approx(-3.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(es.eigenvalues()[i] == doctest::Approx(1.0).epsilon(1e-12));

  Mat4 dot_lib = Mat4::Zero();
  for (Axis a : kAxes) dot_lib += embed(1, a) * embed(2, a);
  CHECK((dot - dot_lib).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("expm_hermitian: identity, eigenphases, unitarity, additivity") {
  auto& gen = oracles::rng();
  CHECK((expm_hermitian(oracles::random_hermitian(gen), 0.0) - Mat4::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  const Mat4 u = expm_hermitian(embed(1, Axis::Z), M_PI / 2.0);
  Mat4 expected = Mat4::Zero();
  expected(0, 0) = -kImag;
  expected(1, 1) = -kImag;
  expected(2, 2) = kImag;
  expected(3, 3) = kImag;
  CHECK((u - expected).cwiseAbs().maxCoeff() < 1e-12);

  std::uniform_real_distribution<double> theta(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat4 h = oracles::random_hermitian(gen);
    const double t1 = theta(gen), t2 = theta(gen);
    const Mat4 v = expm_hermitian(h, t1);
    CHECK((v * v.adjoint() - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((expm_hermitian(h, t1) * expm_hermitian(h, t2) - expm_hermitian(h, t1 + t2))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }

  Mat4 bad = oracles::random_hermitian(gen);
  bad(0, 1) += Complex(0.0, 1e-6);
  CHECK_THROWS_AS(expm_hermitian(bad, 1.0), std::invalid_argument);
}

TEST_CASE("density-matrix validity checks are pure predicates") {
  auto& gen = oracles::rng();
  const Mat4 rho = oracles::random_density(gen);
  const DensityReport good = check_density(rho);
  CHECK(good.hermiticity_error < 1e-12);
  CHECK(good.trace_error < 1e-12);
  CHECK(good.min_eigenvalue >= -1e-12);
  CHECK(is_valid_density(good));

  Mat4 off_trace = 1.5 * rho;
  CHECK(!is_valid_density(check_density(off_trace)));

  // A slightly negative eigenvalue is reported but tolerated within the bound.
  Eigen::SelfAdjointEigenSolver<Mat4> es(rho);
  Mat4 dented = rho - (es.eigenvalues()[0] + 5e-4) * es.eigenvectors().col(0) *
                          es.eigenvectors().col(0).adjoint();
  dented /= dented.trace().real();
  const DensityReport report = check_density(dented);
  CHECK(report.min_eigenvalue < 0.0);
  CHECK(is_valid_density(report, 1e-3));
  CHECK(!is_valid_density(report, 1e-9));
}
