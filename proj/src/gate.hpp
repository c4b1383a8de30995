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

#ifndef CDDSIM_GATE_HPP
#define CDDSIM_GATE_HPP

#include "constants.hpp"
#include "qops.hpp"

namespace cddsim {

// Heisenberg exchange generator H0 = J sigma^(1).sigma^(2). Run for a time
// tau with J tau = pi/8 it implements sqrt(SWAP) up to a global phase: the
// triplet picks up e^{-i J tau} and the singlet e^{+3 i J tau}, a relative
// phase of pi/2.
struct GateConfig {
  double j = constants::pi / 8.0;  // exchange constant, rad per time unit
  double tau = 1.0;                // gate duration (the simulation time unit)

  void validate() const;
};

Mat4 h0(const GateConfig& cfg);

// U0(t) = exp(-i H0 t).
Mat4 u0(double t, const GateConfig& cfg);

// Coefficients of the adjoint action of U0 on single-qubit Pauli vectors:
//   U0^dag sigma^(s) U0 = a sigma^(s) + b sigma^(sbar) - c sigma^(s) x sigma^(sbar)
// with a = (1 + cos 4Jt)/2, b = (1 - cos 4Jt)/2, c = sin(4Jt)/2.
struct HeisenbergCoeffs {
  double a, b, c;
};

HeisenbergCoeffs heisenberg_coeffs(double t, const GateConfig& cfg);

// The n component of the vector relation above: the interaction-picture Pauli
// operator on qubit s (1-based). Exact closed form; conjugation by u0 is the
// test oracle.
Mat4 sigma_tilde(int qubit, Axis n, double t, const GateConfig& cfg);

}  // namespace cddsim

#endif
