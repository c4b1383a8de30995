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

#include <stdexcept>

namespace cddsim {

Mat2 pauli(Axis axis) {
  Mat2 m = Mat2::Zero();
  switch (axis) {
    case Axis::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Axis::Y:
      m(0, 1) = -kImag;
      m(1, 0) = kImag;
      break;
    case Axis::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Mat4 embed(int qubit, Axis axis) {
  if (qubit == 1) return kron(pauli(axis), Mat2::Identity());
  if (qubit == 2) return kron(Mat2::Identity(), pauli(axis));
  throw std::invalid_argument("embed: qubit index must be 1 or 2");
}

namespace {

template <typename Mat>
Mat expm_hermitian_impl(const Mat& h, double theta, double herm_tol) {
  const double herm_err = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > herm_tol)
    throw std::invalid_argument("expm_hermitian: input is not Hermitian (max |H - H^dag| = " +
                                std::to_string(herm_err) + ")");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const auto& vals = es.eigenvalues();
  const Mat& vecs = es.eigenvectors();
  Mat out = Mat::Zero();
  for (int k = 0; k < vals.size(); ++k) {
    const Complex phase = std::exp(-kImag * theta * vals[k]);
    out.noalias() += phase * (vecs.col(k) * vecs.col(k).adjoint());
  }
  return out;
}

}  // namespace

Mat2 expm_hermitian(const Mat2& h, double theta, double herm_tol) {
  return expm_hermitian_impl(h, theta, herm_tol);
}

Mat4 expm_hermitian(const Mat4& h, double theta, double herm_tol) {
  return expm_hermitian_impl(h, theta, herm_tol);
}

DensityReport check_density(const Mat4& rho) {
  DensityReport report;
  report.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  report.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<Mat4> es((rho + rho.adjoint()) / 2.0);
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  return report;
}

bool is_valid_density(const DensityReport& report, double positivity_tol, double herm_tol,
                      double trace_tol) {
  return report.hermiticity_error <= herm_tol && report.trace_error <= trace_tol &&
         report.min_eigenvalue >= -positivity_tol;
}

}  // namespace cddsim
