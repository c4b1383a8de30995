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

#ifndef CDDSIM_METRICS_HPP
#define CDDSIM_METRICS_HPP

#include "qops.hpp"

namespace cddsim {

// Wootters concurrence C = max(0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4))
// with mu_i the decreasing eigenvalues of rho (sy x sy) rho* (sy x sy),
// conjugation taken in the fixed product basis. Slightly negative eigenvalues
// from roundoff (or from tolerated Born positivity violations) are truncated
// to zero before the square roots. Throws on non-Hermitian input.
double concurrence(const Mat4& rho);

// Overlap <psi0| rho |psi0>; psi0 must be normalized within 1e-8.
double fidelity(const Mat4& rho, const Ket& psi0);

// Clamp a metric into [0, 1]: excursions up to slack are roundoff and get
// clamped, anything larger is an error (SimulationError).
double clamp_metric(double value, const char* what, double slack = 1e-6);

}  // namespace cddsim

#endif
