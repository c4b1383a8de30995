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

#ifndef CDDSIM_CONSTANTS_HPP
#define CDDSIM_CONSTANTS_HPP

#include <numbers>

namespace cddsim::constants {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018 exact values (SI).
inline constexpr double boltzmann_J_per_K = 1.380649e-23;
inline constexpr double planck_J_s = 6.62607015e-34;
inline constexpr double hbar_J_s = planck_J_s / (2.0 * pi);

// k_B T / hbar in rad/s, then scaled by the time unit in seconds.
inline constexpr double temperature_to_rad(double kelvin, double time_unit_seconds) {
  return boltzmann_J_per_K * kelvin / hbar_J_s * time_unit_seconds;
}

}  // namespace cddsim::constants

#endif
