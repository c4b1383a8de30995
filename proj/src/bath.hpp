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

#ifndef CDDSIM_BATH_HPP
#define CDDSIM_BATH_HPP

#include <vector>

#include "constants.hpp"
#include "qops.hpp"
#include "quadrature.hpp"

namespace cddsim {

enum class BathTopology { Common, Independent };

// Bosonic bath with spectral density J(w) = eta w^s / w_c^{s-1} exp(-w/w_c)
// and thermal occupation nbar(w) = 1/(exp(beta w) - 1). Couplings enter the
// dynamics through the complex vectors lambda per qubit; the conventional
// decomposition
//   lambda = (lambda_ad/2)(x + i y) + lambda_z z
// gives sigma_+ B + sigma_- B^dag (amplitude damping) plus sigma_z (B + B^dag)
// (dephasing).
struct BathSpec {
  double eta = 0.05;
  double s_exp = 1.0;                        // 1 = ohmic, 3 = super-ohmic
  double omega_c = 2.0 * constants::pi;  // cutoff, rad per time unit
  // k_B T / hbar in rad per time unit; default is 0.2 K with a 1 ns time unit.
  double temperature_rad = constants::temperature_to_rad(0.2, 1e-9);
  BathTopology topology = BathTopology::Independent;
  CVec3 lambda_1{Complex(0.5, 0.0), Complex(0.0, 0.5), Complex(1.0, 0.0)};
  CVec3 lambda_2{Complex(0.5, 0.0), Complex(0.0, 0.5), Complex(1.0, 0.0)};

  void validate() const;

  const CVec3& lambda(int qubit) const { return qubit == 1 ? lambda_1 : lambda_2; }
};

CVec3 make_lambda(double lambda_ad, double lambda_z);

// Default temperature: 0.2 K with a 1 ns time unit.
double default_temperature_rad();

double spectral_density(double omega, const BathSpec& spec);

// Frequency and value of the spectral-density maximum: s w_c and
// eta w_c (s/e)^s.
double spectral_peak_frequency(const BathSpec& spec);
double spectral_peak_value(const BathSpec& spec);

double thermal_occupation(double omega, const BathSpec& spec);

// Environment topology factor: 1 for a common bath, delta_{s,s'} for
// independent identical baths.
int gamma_factor(int s, int s_prime, const BathSpec& spec);

// Correlation kernels (topology factor excluded):
//   T1(t) = int_0^inf dw J(w) nbar(w) e^{-i w t}
//   T2(t) = conj(T1(t)) + int_0^inf dw J(w) e^{+i w t}
// Integrands are cut at 40 w_c; the exponential cutoff bounds the tail by
// ~ eta w_c^2 40^s e^{-40}, far below any tolerance used here.
Complex kernel_t1(double t, const BathSpec& spec, const quad::QuadratureOptions& opts = {});
Complex kernel_t2(double t, const BathSpec& spec, const quad::QuadratureOptions& opts = {});

// Closed form of the zero-temperature part, eta w_c^2 Gamma(s+1)/(1-i w_c t)^{s+1}.
// Independent of the quadrature path; used by the check suite and tests.
Complex kernel_zero_temperature_closed_form(double t, const BathSpec& spec);

// Kernels sampled on the half-step grid t_q = q dt/2, q = 0..2N, as the
// integrator consumes them (full grid plus substep midpoints).
struct KernelSet {
  int n_steps = 0;
  double dt = 0.0;
  std::vector<Complex> t1;  // size 2 n_steps + 1
  std::vector<Complex> t2;
  double max_quadrature_error = 0.0;

  const Complex& t1_fine(int q) const { return t1[q]; }
  const Complex& t2_fine(int q) const { return t2[q]; }
  Complex t1_at(int grid_index) const { return t1[2 * grid_index]; }
  Complex t2_at(int grid_index) const { return t2[2 * grid_index]; }
  bool all_zero() const;
};

KernelSet build_kernel_table(const BathSpec& spec, double t_max, int n_steps,
                             const quad::QuadratureOptions& opts = {});

// Discretization of the kernel integrals over fixed Gauss-Legendre nodes,
//   T1(t) ~ sum_j c1_j e^{-i w_j t},   T2(t) ~ sum_j c2_j e^{+i w_j t},
// which makes the memory convolutions separable in t. Node count grows with
// w_c t_max so the oscillatory factor stays resolved.
struct KernelExpansion {
  std::vector<double> nodes;  // frequencies w_j
  std::vector<double> c1;     // weight * J(w_j) * nbar(w_j)
  std::vector<double> c2;     // weight * J(w_j) * (nbar(w_j) + 1)

  Complex t1_value(double t) const;
  Complex t2_value(double t) const;
};

KernelExpansion build_kernel_expansion(const BathSpec& spec, double t_max);

}  // namespace cddsim

#endif
