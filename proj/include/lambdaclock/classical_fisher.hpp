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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "lambdaclock/config.hpp"
#include "lambdaclock/errors.hpp"
#include "lambdaclock/numerics.hpp"

namespace lambdaclock {

/// Densities must integrate/sum to one within this tolerance.
inline constexpr double normalization_tol = 1e-8;
/// Analytic scores must match finite differences to this relative tolerance.
inline constexpr double score_check_tol = 1e-5;

struct DiscreteOutcomes {
  std::vector<double> outcomes;
};

struct ContinuousInterval {
  double lo = 0.0;
  double hi = 1.0;
};

using SampleSpace = std::variant<DiscreteOutcomes, ContinuousInterval>;

/// A parametric family p(x|theta): the home of classical distinguishability.
///
/// log_density is mandatory. The analytic score is optional; when absent,
/// scores fall back to central finite differences of log_density with step
/// fd_step * max(1, |theta_i|). The sampler is optional and only needed by
/// Monte-Carlo harnesses. Infinite supports must be truncated by the model
/// author to an interval carrying all but < 1e-10 of the mass.
struct ParametricModel {
  int param_dim = 1;
  SampleSpace sample_space;
  std::function<double(double, const Eigen::VectorXd&)> log_density;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> score;
  std::function<double(SeededRng&, const Eigen::VectorXd&)> sampler;
  std::string name;
};

/// Fisher information metric evaluated at one parameter point.
struct FisherMetricTensor {
  Eigen::VectorXd theta;
  Eigen::MatrixXd g;
};

/// Ordered samples (lambda_k, theta_k) of a causally admissible path in
/// parameter space. Causal admissibility is operationalized as strict
/// monotonicity of the path label.
struct ParamTrajectory {
  std::vector<double> lambdas;
  std::vector<Eigen::VectorXd> thetas;
};

inline ParamTrajectory make_param_trajectory(std::vector<double> lambdas,
                                             std::vector<Eigen::VectorXd> thetas) {
  if (lambdas.size() != thetas.size()) {
    throw DimensionMismatch("trajectory label/point counts differ");
  }
  if (lambdas.size() < 2) {
    throw TooFewSamples("trajectory needs at least 2 samples");
  }
  if (!strictly_increasing(lambdas)) {
    throw NonMonotoneSamples("trajectory labels must be strictly increasing");
  }
  const Eigen::Index d = thetas.front().size();
  for (const auto& th : thetas) {
    if (th.size() != d) {
      throw DimensionMismatch("trajectory points have mixed dimensions");
    }
  }
  return ParamTrajectory{std::move(lambdas), std::move(thetas)};
}

/// Score vector at (x, theta): analytic when supplied, otherwise central
/// finite differences of log_density.
inline Eigen::VectorXd score_at(const ParametricModel& model, double x,
                                const Eigen::VectorXd& theta,
                                const NumericalConfig& cfg) {
  if (model.score) return model.score(x, theta);
  Eigen::VectorXd s(model.param_dim);
  Eigen::VectorXd probe = theta;
  for (int i = 0; i < model.param_dim; ++i) {
    const double h = cfg.fd_step * std::max(1.0, std::abs(theta[i]));
    probe[i] = theta[i] + h;
    const double up = model.log_density(x, probe);
    probe[i] = theta[i] - h;
    const double dn = model.log_density(x, probe);
    probe[i] = theta[i];
    s[i] = (up - dn) / (2.0 * h);
  }
  return s;
}

namespace detail {

inline double density_at(const ParametricModel& model, double x,
                         const Eigen::VectorXd& theta) {
  const double lp = model.log_density(x, theta);
  if (!std::isfinite(lp)) {
    throw DegenerateSupport("density vanishes at a probed point x=" +
                            std::to_string(x));
  }
  return std::exp(lp);
}

inline double total_mass(const ParametricModel& model,
                         const Eigen::VectorXd& theta,
                         const NumericalConfig& cfg) {
  if (const auto* d = std::get_if<DiscreteOutcomes>(&model.sample_space)) {
    double mass = 0.0;
    for (double x : d->outcomes) mass += std::exp(model.log_density(x, theta));
    return mass;
  }
  const auto& iv = std::get<ContinuousInterval>(model.sample_space);
  return composite_gauss_legendre(
      [&](double x) { return std::exp(model.log_density(x, theta)); }, iv.lo,
      iv.hi, cfg.quad_points);
}

}  // namespace detail

inline void check_normalization(const ParametricModel& model,
                                const Eigen::VectorXd& theta,
                                const NumericalConfig& cfg) {
  const double mass = detail::total_mass(model, theta, cfg);
  if (std::abs(mass - 1.0) > normalization_tol) {
    throw NonNormalizedDensity(model.name + ": density mass " +
                               std::to_string(mass) + " at the probe point");
  }
}

/// Fisher information metric g_ij = E[score_i score_j], by exact outcome sum
/// for discrete sample spaces and fixed-order composite quadrature for
/// continuous ones.
inline FisherMetricTensor fisher_metric(const ParametricModel& model,
                                        const Eigen::VectorXd& theta,
                                        const NumericalConfig& cfg) {
  if (theta.size() != model.param_dim) {
    throw DimensionMismatch("theta dimension does not match the model");
  }
  check_normalization(model, theta, cfg);
  const int d = model.param_dim;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  if (const auto* disc = std::get_if<DiscreteOutcomes>(&model.sample_space)) {
    for (double x : disc->outcomes) {
      const double p = detail::density_at(model, x, theta);
      const Eigen::VectorXd s = score_at(model, x, theta, cfg);
      g.noalias() += p * s * s.transpose();
    }
  } else {
    const auto& iv = std::get<ContinuousInterval>(model.sample_space);
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        const double gij = composite_gauss_legendre(
            [&](double x) {
              const double p = detail::density_at(model, x, theta);
              const Eigen::VectorXd s = score_at(model, x, theta, cfg);
              return p * s[i] * s[j];
            },
            iv.lo, iv.hi, cfg.quad_points);
        g(i, j) = gij;
        g(j, i) = gij;
      }
    }
  }
  return FisherMetricTensor{theta, g};
}

/// Informational line element sqrt(dtheta^T g dtheta).
inline double line_element(const FisherMetricTensor& metric,
                           const Eigen::VectorXd& dtheta) {
  if (dtheta.size() != metric.g.rows()) {
    throw DimensionMismatch("dtheta dimension does not match the metric");
  }
  const double q = dtheta.dot(metric.g * dtheta);
  return std::sqrt(std::max(q, 0.0));
}

/// Accumulated Fisher path length along a trajectory. The path is taken
/// piecewise-linear between samples; each segment integral of the speed
/// sqrt(dtheta^T g dtheta) is refined by midpoint panel doubling with
/// Richardson extrapolation until it converges to integ_refine_tol. The
/// result is therefore exactly additive over concatenated subpaths and
/// independent of the label values within each segment.
inline double path_length(const ParametricModel& model,
                          const ParamTrajectory& traj,
                          const NumericalConfig& cfg) {
  if (traj.lambdas.size() != traj.thetas.size()) {
    throw DimensionMismatch("trajectory label/point counts differ");
  }
  if (traj.lambdas.size() < 2) {
    throw TooFewSamples("path_length needs at least 2 samples");
  }
  if (!strictly_increasing(traj.lambdas)) {
    throw NonMonotoneSamples("trajectory labels must be strictly increasing");
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < traj.thetas.size(); ++k) {
    const Eigen::VectorXd& a = traj.thetas[k];
    const Eigen::VectorXd step = traj.thetas[k + 1] - a;
    if (step.norm() == 0.0) continue;
    total += refine_unit_integral(
        [&](double u) {
          const Eigen::VectorXd th = a + u * step;
          return line_element(fisher_metric(model, th, cfg), step);
        },
        cfg.integ_refine_tol);
  }
  return total;
}

/// Cramer-Rao covariance lower bound g^{-1}.
inline Eigen::MatrixXd cramer_rao_bound(const FisherMetricTensor& metric,
                                        const NumericalConfig& cfg) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(metric.g);
  const Eigen::VectorXd evals = es.eigenvalues();
  const double scale = evals.cwiseAbs().maxCoeff();
  if (scale <= 0.0 || evals.minCoeff() <= cfg.eig_cutoff * scale) {
    throw SingularMetric(
        "Fisher metric is not invertible: a parameter direction is "
        "non-identifiable");
  }
  return es.eigenvectors() * evals.cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

struct CramerRaoReport {
  double empirical_var = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};

/// Monte-Carlo check of the Cramer-Rao bound for a scalar estimator of
/// theta[0] built from datasets of draws_per_trial i.i.d. samples. The
/// estimator must be unbiased at theta for the supplied model; that is the
/// caller's responsibility. satisfied allows the statistical slack
/// 1 - 3/sqrt(n_trials) on the bound.
inline CramerRaoReport verify_cramer_rao_mc(
    const ParametricModel& model, const Eigen::VectorXd& theta,
    const std::function<double(const std::vector<double>&)>& estimator,
    int draws_per_trial, int n_trials, std::uint64_t seed,
    const NumericalConfig& cfg) {
  if (!model.sampler) {
    throw ConfigError(model.name + ": model has no sampler");
  }
  const Eigen::MatrixXd inv = cramer_rao_bound(fisher_metric(model, theta, cfg), cfg);
  CramerRaoReport report;
  report.bound = inv(0, 0) / static_cast<double>(draws_per_trial);

  SeededRng rng(seed);
  std::vector<double> estimates(static_cast<std::size_t>(n_trials));
  std::vector<double> data(static_cast<std::size_t>(draws_per_trial));
  for (int t = 0; t < n_trials; ++t) {
    for (int i = 0; i < draws_per_trial; ++i) data[i] = model.sampler(rng, theta);
    estimates[t] = estimator(data);
  }
  report.empirical_var = sample_variance(estimates);
  const double slack = 1.0 - 3.0 / std::sqrt(static_cast<double>(n_trials));
  report.satisfied = report.empirical_var >= report.bound * slack;
  return report;
}

}  // namespace lambdaclock
