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

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lambdaclock/classical_fisher.hpp"
#include "lambdaclock/config.hpp"
#include "lambdaclock/errors.hpp"
#include "lambdaclock/numerics.hpp"

namespace lambdaclock {

/// Below this eta variance a clock is reported as "perfect" instead of with a
/// numeric inverse (which would overflow toward infinity and break JSON).
inline constexpr double stability_perfect_floor = 1e-15;

/// Monotone piecewise-linear map from accumulated distinguishability to clock
/// time. Both knot axes are strictly increasing, so the map is invertible by
/// swapping the axes.
struct CalibrationMap {
  std::vector<double> lambda_knots;
  std::vector<double> time_knots;
};

inline CalibrationMap build_calibration(std::vector<double> lambda_samples,
                                        std::vector<double> time_samples) {
  if (lambda_samples.size() != time_samples.size()) {
    throw DimensionMismatch("calibration samples must pair up");
  }
  if (lambda_samples.size() < 2) {
    throw TooFewSamples("calibration needs at least 2 knots");
  }
  if (!strictly_increasing(lambda_samples) || !strictly_increasing(time_samples)) {
    // A non-monotone calibration is an unusable clock, not a numerics issue.
    throw NonMonotoneSamples(
        "calibration knots must be strictly increasing in both axes");
  }
  return CalibrationMap{std::move(lambda_samples), std::move(time_samples)};
}

inline CalibrationMap invert_calibration(const CalibrationMap& map) {
  return CalibrationMap{map.time_knots, map.lambda_knots};
}

/// Piecewise-linear interpolation at the calibration knots. Extrapolation is
/// refused: a clock means nothing outside the range it was calibrated on.
inline double reconstruct_time(const CalibrationMap& map, double lambda) {
  const std::vector<double>& xs = map.lambda_knots;
  const std::vector<double>& ys = map.time_knots;
  if (lambda < xs.front() || lambda > xs.back()) {
    throw OutOfCalibrationRange("lambda outside the calibrated range");
  }
  const auto it = std::upper_bound(xs.begin(), xs.end(), lambda);
  std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  if (hi == xs.size()) --hi;  // lambda == last knot
  if (hi == 0) ++hi;
  const std::size_t lo = hi - 1;
  const double w = (lambda - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

/// Oscillator phase clock: t = (phi - phi0) / omega.
inline double phase_clock_time(double phi, double phi0, double omega) {
  if (!(omega > 0.0)) throw ConfigError("phase clock needs omega > 0");
  return (phi - phi0) / omega;
}

/// Decay clock, forward direction: Lambda_D = -ln(n / n0).
inline double decay_lambda(double n, double n0) {
  if (!(n0 > 0.0) || !(n > 0.0) || n > n0) {
    throw InvalidPopulation("decay populations need 0 < n <= n0");
  }
  // + 0.0 turns the -0.0 from log(1) into a plain zero for the reports.
  return -std::log(n / n0) + 0.0;
}

/// Decay clock, time reconstruction: t = Lambda_D / Gamma.
inline double decay_time(double lambda_d, double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("decay clock needs gamma > 0");
  if (lambda_d < 0.0) throw InvalidPopulation("decay lambda must be nonnegative");
  return lambda_d / gamma;
}

/// Ticks carrying a parametric model: the distribution at tick N is the model
/// evaluated at thetas[N].
struct ModelTicks {
  ParametricModel model;
  std::vector<long> indices;
  std::vector<Eigen::VectorXd> thetas;
};

/// Ticks given directly as discrete outcome distributions.
struct RawTicks {
  std::vector<long> indices;
  std::vector<std::vector<double>> distributions;
};

using TickSeries = std::variant<ModelTicks, RawTicks>;

namespace detail {

inline void check_tick_indices(const std::vector<long>& indices,
                               std::size_t payload) {
  if (indices.size() != payload) {
    throw DimensionMismatch("tick indices must pair with distributions");
  }
  if (indices.size() < 2) throw TooFewTicks("a tick series needs at least 2 ticks");
  for (std::size_t k = 1; k < indices.size(); ++k) {
    if (indices[k] <= indices[k - 1]) {
      throw NonMonotoneSamples("tick indices must be strictly increasing");
    }
  }
}

}  // namespace detail

inline TickSeries make_model_ticks(ParametricModel model,
                                   std::vector<long> indices,
                                   std::vector<Eigen::VectorXd> thetas) {
  detail::check_tick_indices(indices, thetas.size());
  for (const auto& th : thetas) {
    if (th.size() != model.param_dim) {
      throw DimensionMismatch("tick parameter does not match the model");
    }
  }
  return ModelTicks{std::move(model), std::move(indices), std::move(thetas)};
}

inline TickSeries make_raw_ticks(std::vector<long> indices,
                                 std::vector<std::vector<double>> distributions) {
  detail::check_tick_indices(indices, distributions.size());
  for (const auto& p : distributions) {
    if (p.empty()) throw DimensionMismatch("empty tick distribution");
    if (p.size() != distributions.front().size()) {
      throw DimensionMismatch("tick distributions must share an outcome space");
    }
    double mass = 0.0;
    for (double v : p) {
      if (v < 0.0) throw NonNormalizedDensity("negative tick probability");
      mass += v;
    }
    if (std::abs(mass - 1.0) > normalization_tol) {
      throw NonNormalizedDensity("tick distribution mass deviates from 1");
    }
  }
  return RawTicks{std::move(indices), std::move(distributions)};
}

/// Per-tick distinguishability: the Fisher distance between consecutive tick
/// distributions. Model ticks integrate the classical metric along the line
/// segment joining the parameters; raw distributions use the closed-form
/// geodesic on the simplex, twice the Bhattacharyya angle.
inline std::vector<double> tick_distinguishability(const TickSeries& series,
                                                   const NumericalConfig& cfg) {
  std::vector<double> etas;
  if (const auto* model_ticks = std::get_if<ModelTicks>(&series)) {
    etas.reserve(model_ticks->thetas.size() - 1);
    for (std::size_t k = 0; k + 1 < model_ticks->thetas.size(); ++k) {
      const auto traj = make_param_trajectory(
          {0.0, 1.0}, {model_ticks->thetas[k], model_ticks->thetas[k + 1]});
      etas.push_back(path_length(model_ticks->model, traj, cfg));
    }
  } else {
    const auto& raw = std::get<RawTicks>(series);
    etas.reserve(raw.distributions.size() - 1);
    for (std::size_t k = 0; k + 1 < raw.distributions.size(); ++k) {
      const auto& p = raw.distributions[k];
      const auto& q = raw.distributions[k + 1];
      double bc = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) bc += std::sqrt(p[i] * q[i]);
      bc = std::clamp(bc, 0.0, 1.0);
      etas.push_back(2.0 * std::acos(bc));
    }
  }
  return etas;
}

struct StabilityReport {
  double variance = 0.0;
  double s_c = 0.0;      // meaningful only when !perfect
  bool perfect = false;  // variance below stability_perfect_floor
};

/// Clock regularity score: inverse sample variance of the per-tick eta list.
inline StabilityReport stability_functional(const std::vector<double>& etas,
                                            const NumericalConfig&) {
  if (etas.size() < 2) {
    throw TooFewTicks("stability needs at least 2 eta values");
  }
  StabilityReport report;
  report.variance = sample_variance(etas);
  if (report.variance < stability_perfect_floor) {
    report.perfect = true;
  } else {
    report.s_c = 1.0 / report.variance;
  }
  return report;
}

}  // namespace lambdaclock
