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

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace cddsim {

double concurrence(const Mat4& rho) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-8)
    throw SimulationError("concurrence: non-Hermitian input (error " + std::to_string(herm) + ")");
  // sqrt(mu_i) of rho * (Y rho^* Y) equal the singular values of the complex
  // symmetric matrix sqrt(rho) Y sqrt(rho)^*, which the SVD delivers without
  // squaring away the small ones. Negative eigenvalues of rho (tolerated Born
  // positivity slips) are truncated to zero in the square root.
  Eigen::SelfAdjointEigenSolver<Mat4> es((rho + rho.adjoint()) / 2.0);
  Ket sqrt_vals;
  for (int i = 0; i < 4; ++i) sqrt_vals[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
  const Mat4 root =
      es.eigenvectors() * sqrt_vals.asDiagonal() * es.eigenvectors().adjoint();
  const Mat4 yy = kron(pauli(Axis::Y), pauli(Axis::Y));
  const Mat4 t = root * yy * root.conjugate();
  Eigen::JacobiSVD<Mat4> svd(t);
  const auto& sigma = svd.singularValues();  // sorted descending
  return std::max(0.0, sigma[0] - sigma[1] - sigma[2] - sigma[3]);
}

double fidelity(const Mat4& rho, const Ket& psi0) {
  const double norm_err = std::abs(psi0.norm() - 1.0);
  if (norm_err > 1e-8)
    throw ConfigError("fidelity: psi0 is not normalized (|norm - 1| = " +
                      std::to_string(norm_err) + ")");
  return (psi0.adjoint() * rho * psi0).value().real();
}

double clamp_metric(double value, const char* what, double slack) {
  if (value < -slack || value > 1.0 + slack)
    throw SimulationError(std::string(what) + " outside [0,1] beyond tolerance: " +
                          std::to_string(value));
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace cddsim
