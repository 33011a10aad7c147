// Copyright 2026 The lambda-clock authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "lambdaclock/config.hpp"
#include "lambdaclock/errors.hpp"

namespace lambdaclock {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendreRule gauss_legendre_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess for the i-th root.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

namespace detail {
inline const GaussLegendreRule& panel_rule() {
  static const GaussLegendreRule rule = gauss_legendre_rule(16);
  return rule;
}
}  // namespace detail

/// Fixed-order composite quadrature of f over [lo, hi]: the interval is split
/// into equal panels carrying a 16-point Gauss-Legendre rule each, with the
/// panel count chosen so the total node count approximates total_points.
template <typename F>
double composite_gauss_legendre(F&& f, double lo, double hi, int total_points) {
  const auto& rule = detail::panel_rule();
  const int k = static_cast<int>(rule.nodes.size());
  const int panels = std::max(1, (total_points + k - 1) / k);
  const double width = (hi - lo) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    const double mid = a + 0.5 * width;
    const double half = 0.5 * width;
    double panel_sum = 0.0;
    for (int i = 0; i < k; ++i) {
      panel_sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    sum += half * panel_sum;
  }
  return sum;
}

/// Composite midpoint estimate of the integral of f over [0, 1] with m panels.
template <typename F>
double midpoint_sum(F&& f, int m) {
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    sum += f((i + 0.5) / m);
  }
  return sum / m;
}

/// Integral of f over [0, 1] by midpoint-rule panel doubling with Richardson
/// extrapolation, refined until successive extrapolated estimates agree to
/// rel_tol (relative, with an absolute floor for near-zero integrals).
template <typename F>
double refine_unit_integral(F&& f, double rel_tol, int max_panels = 4096) {
  double coarse = midpoint_sum(f, 1);
  double prev_extrap = coarse;
  for (int m = 2; m <= max_panels; m *= 2) {
    const double fine = midpoint_sum(f, m);
    // Midpoint rule is second order: one Richardson step.
    const double extrap = fine + (fine - coarse) / 3.0;
    const double scale = std::max(std::abs(extrap), 1e-300);
    if (std::abs(extrap - prev_extrap) <= rel_tol * scale ||
        std::abs(fine - coarse) <= rel_tol * scale) {
      return extrap;
    }
    prev_extrap = extrap;
    coarse = fine;
  }
  return prev_extrap;
}

/// Deterministic random stream for Monte-Carlo harnesses and jitter models.
/// The engine is std::mt19937_64 (bit-exact across implementations); the
/// variate transforms are fixed here rather than taken from <random>
/// distributions, whose output is implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in (0, 1], using the top 53 bits of the engine output.
  double uniform01() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (the cosine branch; the spare is unused
  /// so the stream position is one pair of uniforms per variate).
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  bool bernoulli(double p) { return uniform01() <= p; }

  /// Exponential with unit rate.
  double exponential() { return -std::log(uniform01()); }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Unbiased (n-1 divisor) sample variance.
inline double sample_variance(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw TooFewSamples("sample_variance needs at least 2 values");
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(n - 1);
}

inline bool strictly_increasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) return false;
  }
  return true;
}

/// Uniform grid with both endpoints included; the last point is set exactly.
inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw TooFewSamples("linspace needs at least 2 points");
  if (!(hi > lo)) throw NonMonotoneSamples("linspace needs hi > lo");
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
  }
  xs.back() = hi;
  return xs;
}

}  // namespace lambdaclock
