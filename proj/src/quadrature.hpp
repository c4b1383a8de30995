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

#ifndef CDDSIM_QUADRATURE_HPP
#define CDDSIM_QUADRATURE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace cddsim::quad {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_depth = 40;
};

struct QuadResult {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  long evaluations = 0;
};

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on the
// Legendre recurrence and cached per order.
class GaussLegendre {
 public:
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussLegendre& rule(int n) {
    static std::mutex mutex;
    static std::unordered_map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
    return it->second;
  }

 private:
  explicit GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      // Tricomi initial guess, then Newton on P_n(x) = 0.
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }
};

// Fixed-order Gauss-Legendre on [a, b].
template <typename F>
auto gauss_panel(F&& f, double a, double b, int order) {
  const auto& gl = GaussLegendre::rule(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  using R = decltype(f(0.0));
  R acc = R(0);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i)
    acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
  return half * acc;
}

namespace detail {

// Error budget is spread per unit length so wide smooth regions are not
// over-refined by narrow hard ones.
template <typename F>
void integrate_panel(F& f, double a, double b, double tol_per_len, int depth,
                     const QuadratureOptions& opts, QuadResult& out) {
  constexpr int kOrder = 15;
  const auto whole = gauss_panel(f, a, b, kOrder);
  const double mid = 0.5 * (a + b);
  const auto left = gauss_panel(f, a, mid, kOrder);
  const auto right = gauss_panel(f, mid, b, kOrder);
  out.evaluations += 3 * kOrder;
  const double err = std::abs(whole - (left + right));
  if (err <= tol_per_len * (b - a) || depth >= opts.max_depth) {
    if (depth >= opts.max_depth && err > tol_per_len * (b - a))
      throw QuadratureError("adaptive quadrature did not converge (estimated panel error " +
                                std::to_string(err) + ")",
                            err);
    out.value += left + right;
    out.error_estimate += err;
    return;
  }
  integrate_panel(f, a, mid, tol_per_len, depth + 1, opts, out);
  integrate_panel(f, mid, b, tol_per_len, depth + 1, opts, out);
}

}  // namespace detail

// Adaptive Gauss-Legendre on [a, b]. The tolerance is abs_tol plus rel_tol
// times a first whole-interval magnitude estimate.
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  QuadResult out;
  if (a == b) return out;
  const auto coarse = gauss_panel(f, a, b, 31);
  out.evaluations += 31;
  const double tol = opts.abs_tol + opts.rel_tol * std::abs(coarse);
  detail::integrate_panel(f, a, b, tol / (b - a), 0, opts, out);
  return out;
}

}  // namespace cddsim::quad

#endif
