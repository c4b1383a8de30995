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

#include "gate.hpp"

#include <cmath>

#include "errors.hpp"

namespace cddsim {

void GateConfig::validate() const {
  if (tau <= 0.0) throw ConfigError("gate: tau must be positive");
}

Mat4 h0(const GateConfig& cfg) {
  Mat4 sum = Mat4::Zero();
  for (Axis m : {Axis::X, Axis::Y, Axis::Z}) sum += embed(1, m) * embed(2, m);
  return cfg.j * sum;
}

Mat4 u0(double t, const GateConfig& cfg) { return expm_hermitian(h0(cfg), t); }

HeisenbergCoeffs heisenberg_coeffs(double t, const GateConfig& cfg) {
  const double phase = 4.0 * cfg.j * t;
  return {0.5 * (1.0 + std::cos(phase)), 0.5 * (1.0 - std::cos(phase)), 0.5 * std::sin(phase)};
}

namespace {

// (sigma^(s) x sigma^(sbar))_n = sum_{jk} eps_{njk} sigma_j^(s) sigma_k^(sbar).
Mat4 cross_component(int qubit, Axis n) {
  const int ni = static_cast<int>(n);
  const int j = (ni + 1) % 3;
  const int k = (ni + 2) % 3;
  const Mat2 sj = pauli(static_cast<Axis>(j));
  const Mat2 sk = pauli(static_cast<Axis>(k));
  if (qubit == 1) return kron(sj, sk) - kron(sk, sj);
  return kron(sk, sj) - kron(sj, sk);
}

}  // namespace

Mat4 sigma_tilde(int qubit, Axis n, double t, const GateConfig& cfg) {
  const auto [a, b, c] = heisenberg_coeffs(t, cfg);
  const int other = qubit == 1 ? 2 : 1;
  return a * embed(qubit, n) + b * embed(other, n) - c * cross_component(qubit, n);
}

}  // namespace cddsim
