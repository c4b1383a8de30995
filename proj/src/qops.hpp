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

#ifndef CDDSIM_QOPS_HPP
#define CDDSIM_QOPS_HPP

#include <complex>

#include <Eigen/Dense>

namespace cddsim {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Ket = Eigen::Vector4cd;

inline constexpr Complex kImag{0.0, 1.0};

// Two-qubit operators are 4x4 complex matrices in the fixed product basis
//   {|uu>, |ud>, |du>, |dd>},
// with qubit 1 the left tensor factor and |u> the +1 eigenstate of sigma_z.
// Every module in the library assumes this ordering.

enum class Axis { X = 0, Y = 1, Z = 2 };

Mat2 pauli(Axis axis);

// Kronecker product, qubit 1 on the left.
Mat4 kron(const Mat2& a, const Mat2& b);

// sigma_m acting on qubit s (1-based), identity on the other.
Mat4 embed(int qubit, Axis axis);

inline Mat4 commutator(const Mat4& a, const Mat4& b) { return a * b - b * a; }

// exp(-i theta H) via spectral decomposition; H must be Hermitian within
// herm_tol (max abs entry of H - H^dagger).
Mat2 expm_hermitian(const Mat2& h, double theta, double herm_tol = 1e-12);
Mat4 expm_hermitian(const Mat4& h, double theta, double herm_tol = 1e-12);

// Pure predicates over density-matrix validity. Positivity violations are
// reported, never repaired: second-order Born dynamics does not guarantee a
// positive state, and silently projecting would hide integrator bugs.
struct DensityReport {
  double hermiticity_error = 0.0;  // max abs entry of rho - rho^dagger
  double trace_error = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;
};

DensityReport check_density(const Mat4& rho);

bool is_valid_density(const DensityReport& report, double positivity_tol = 1e-3,
                      double herm_tol = 1e-10, double trace_tol = 1e-8);

}  // namespace cddsim

#endif
