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

#include "bath.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "errors.hpp"

namespace cddsim {

namespace {

constexpr double kCutoffMultiple = 40.0;

// J(w) nbar(w), with the analytic w -> 0 limit (finite for s = 1, zero for
// s > 1) supplied so the quadrature never sees 0/0.
double thermal_weight(double omega, const BathSpec& spec) {
  const double beta = 1.0 / spec.temperature_rad;
  if (omega * beta < 1e-12)
    return spec.eta * std::pow(omega / spec.omega_c, spec.s_exp - 1.0) / beta;
  return spectral_density(omega, spec) / std::expm1(beta * omega);
}

}  // namespace

void BathSpec::validate() const {
  if (eta < 0.0) throw ConfigError("bath: eta must be nonnegative");
  if (omega_c <= 0.0) throw ConfigError("bath: omega_c must be positive");
  if (temperature_rad < 0.0) throw ConfigError("bath: temperature must be nonnegative");
  if (s_exp < 1.0) throw ConfigError("bath: spectral exponent below 1 (sub-ohmic) not supported");
  if (topology == BathTopology::Common &&
      (lambda_1 - lambda_2).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("bath: a common environment uses a single lambda for both qubits");
}

CVec3 make_lambda(double lambda_ad, double lambda_z) {
  return {Complex(0.5 * lambda_ad, 0.0), Complex(0.0, 0.5 * lambda_ad), Complex(lambda_z, 0.0)};
}

double default_temperature_rad() { return constants::temperature_to_rad(0.2, 1e-9); }

double spectral_density(double omega, const BathSpec& spec) {
  if (omega < 0.0) throw ConfigError("spectral_density: negative frequency");
  return spec.eta * std::pow(omega, spec.s_exp) / std::pow(spec.omega_c, spec.s_exp - 1.0) *
         std::exp(-omega / spec.omega_c);
}

double spectral_peak_frequency(const BathSpec& spec) { return spec.s_exp * spec.omega_c; }

double spectral_peak_value(const BathSpec& spec) {
  return spec.eta * spec.omega_c * std::pow(spec.s_exp / std::exp(1.0), spec.s_exp);
}

double thermal_occupation(double omega, const BathSpec& spec) {
  if (omega <= 0.0) throw ConfigError("thermal_occupation: frequency must be positive");
  if (spec.temperature_rad == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / spec.temperature_rad);
}

int gamma_factor(int s, int s_prime, const BathSpec& spec) {
  if (spec.topology == BathTopology::Common) return 1;
  return s == s_prime ? 1 : 0;
}

Complex kernel_t1(double t, const BathSpec& spec, const quad::QuadratureOptions& opts) {
  if (spec.eta == 0.0 || spec.temperature_rad == 0.0) return {0.0, 0.0};
  const double w_max = kCutoffMultiple * spec.omega_c;
  auto integrand = [&](double w) -> Complex {
    return thermal_weight(w, spec) * std::exp(Complex(0.0, -w * t));
  };
  return quad::integrate_adaptive(integrand, 0.0, w_max, opts).value;
}

Complex kernel_t2(double t, const BathSpec& spec, const quad::QuadratureOptions& opts) {
  if (spec.eta == 0.0) return {0.0, 0.0};
  const double w_max = kCutoffMultiple * spec.omega_c;
  auto integrand = [&](double w) -> Complex {
    return spectral_density(w, spec) * std::exp(Complex(0.0, w * t));
  };
  const Complex zero_temp = quad::integrate_adaptive(integrand, 0.0, w_max, opts).value;
  return std::conj(kernel_t1(t, spec, opts)) + zero_temp;
}

Complex kernel_zero_temperature_closed_form(double t, const BathSpec& spec) {
  const Complex base(1.0, -spec.omega_c * t);
  return spec.eta * spec.omega_c * spec.omega_c * std::tgamma(spec.s_exp + 1.0) *
         std::pow(base, -(spec.s_exp + 1.0));
}

bool KernelSet::all_zero() const {
  auto nonzero = [](const Complex& z) { return z != Complex(0.0, 0.0); };
  return std::none_of(t1.begin(), t1.end(), nonzero) &&
         std::none_of(t2.begin(), t2.end(), nonzero);
}

KernelSet build_kernel_table(const BathSpec& spec, double t_max, int n_steps,
                             const quad::QuadratureOptions& opts) {
  if (n_steps < 100) throw ConfigError("build_kernel_table: n_steps must be >= 100");
  if (t_max <= 0.0) throw ConfigError("build_kernel_table: t_max must be positive");
  KernelSet set;
  set.n_steps = n_steps;
  set.dt = t_max / n_steps;
  const int fine_points = 2 * n_steps + 1;
  set.t1.assign(fine_points, {0.0, 0.0});
  set.t2.assign(fine_points, {0.0, 0.0});
  if (spec.eta == 0.0) return set;

  const double h = set.dt / 2.0;
  std::vector<double> errors(fine_points, 0.0);
  auto fill = [&](int begin, int end) {
    const double w_max = kCutoffMultiple * spec.omega_c;
    for (int q = begin; q < end; ++q) {
      const double t = q * h;
      double err = 0.0;
      if (spec.temperature_rad > 0.0) {
        auto th = [&](double w) -> Complex {
          return thermal_weight(w, spec) * std::exp(Complex(0.0, -w * t));
        };
        const auto r = quad::integrate_adaptive(th, 0.0, w_max, opts);
        set.t1[q] = r.value;
        err += r.error_estimate;
      }
      auto zt = [&](double w) -> Complex {
        return spectral_density(w, spec) * std::exp(Complex(0.0, w * t));
      };
      const auto r2 = quad::integrate_adaptive(zt, 0.0, w_max, opts);
      set.t2[q] = std::conj(set.t1[q]) + r2.value;
      errors[q] = err + r2.error_estimate;
    }
  };

  // Points are independent; slice the grid across a few workers. Each slot is
  // written exactly once, so the result does not depend on scheduling.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, 8));
  if (workers <= 1 || fine_points < 256) {
    fill(0, fine_points);
  } else {
    std::vector<std::future<void>> tasks;
    const int chunk = (fine_points + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(fine_points, begin + chunk);
      if (begin < end) tasks.push_back(std::async(std::launch::async, fill, begin, end));
    }
    for (auto& task : tasks) task.get();
  }
  set.max_quadrature_error = *std::max_element(errors.begin(), errors.end());
  return set;
}

Complex KernelExpansion::t1_value(double t) const {
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < nodes.size(); ++j)
    acc += c1[j] * std::exp(Complex(0.0, -nodes[j] * t));
  return acc;
}

Complex KernelExpansion::t2_value(double t) const {
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < nodes.size(); ++j)
    acc += c2[j] * std::exp(Complex(0.0, nodes[j] * t));
  return acc;
}

KernelExpansion build_kernel_expansion(const BathSpec& spec, double t_max) {
  KernelExpansion exp;
  if (spec.eta == 0.0) return exp;
  const double w_max = kCutoffMultiple * spec.omega_c;
  const int panels = static_cast<int>(kCutoffMultiple);
  // Phase across one panel of width w_c is at most w_c t_max.
  const int order = std::max(12, static_cast<int>(0.75 * spec.omega_c * t_max) + 8);
  const auto& gl = quad::GaussLegendre::rule(order);
  for (int p = 0; p < panels; ++p) {
    const double a = w_max * p / panels;
    const double b = w_max * (p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < order; ++i) {
      const double w = mid + half * gl.nodes[i];
      const double weight = half * gl.weights[i];
      const double thermal = spec.temperature_rad > 0.0 ? thermal_weight(w, spec) : 0.0;
      exp.nodes.push_back(w);
      exp.c1.push_back(weight * thermal);
      exp.c2.push_back(weight * (thermal + spectral_density(w, spec)));
    }
  }
  return exp;
}

}  // namespace cddsim
