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
#include <string>
#include <vector>

#include "lambdaclock/classical_fisher.hpp"
#include "lambdaclock/errors.hpp"

namespace lambdaclock {

// Built-in model registry, referenced by name from the CLI.
//
// Continuous supports are truncated to finite intervals chosen so that the
// missing tail mass stays below 1e-10 over the documented admissible
// parameter ranges:
//   bernoulli            theta = (p),            p in [0.01, 0.99]
//   gaussian_mean        theta = (mu), sigma=1,  mu in [-3, 3]
//   exponential_rate     theta = (rate),         rate in [1, 8]
//   gaussian_likelihood  theta = (mu, sigma),    mu in [-3, 3], sigma in [0.5, 2]

inline ParametricModel make_bernoulli_model() {
  ParametricModel m;
  m.name = "bernoulli";
  m.param_dim = 1;
  m.sample_space = DiscreteOutcomes{{0.0, 1.0}};
  m.log_density = [](double x, const Eigen::VectorXd& th) {
    return x > 0.5 ? std::log(th[0]) : std::log1p(-th[0]);
  };
  m.score = [](double x, const Eigen::VectorXd& th) {
    Eigen::VectorXd s(1);
    s[0] = (x - th[0]) / (th[0] * (1.0 - th[0]));
    return s;
  };
  m.sampler = [](SeededRng& rng, const Eigen::VectorXd& th) {
    return rng.bernoulli(th[0]) ? 1.0 : 0.0;
  };
  return m;
}

inline ParametricModel make_gaussian_mean_model() {
  ParametricModel m;
  m.name = "gaussian_mean";
  m.param_dim = 1;
  m.sample_space = ContinuousInterval{-16.0, 16.0};
  m.log_density = [](double x, const Eigen::VectorXd& th) {
    const double d = x - th[0];
    return -0.5 * d * d - 0.5 * std::log(2.0 * M_PI);
  };
  m.score = [](double x, const Eigen::VectorXd& th) {
    Eigen::VectorXd s(1);
    s[0] = x - th[0];
    return s;
  };
  m.sampler = [](SeededRng& rng, const Eigen::VectorXd& th) {
    return th[0] + rng.normal();
  };
  return m;
}

inline ParametricModel make_exponential_rate_model() {
  ParametricModel m;
  m.name = "exponential_rate";
  m.param_dim = 1;
  m.sample_space = ContinuousInterval{0.0, 40.0};
  m.log_density = [](double x, const Eigen::VectorXd& th) {
    return std::log(th[0]) - th[0] * x;
  };
  m.score = [](double x, const Eigen::VectorXd& th) {
    Eigen::VectorXd s(1);
    s[0] = 1.0 / th[0] - x;
    return s;
  };
  m.sampler = [](SeededRng& rng, const Eigen::VectorXd& th) {
    return rng.exponential() / th[0];
  };
  return m;
}

/// Gaussian likelihood with both location and scale free: the generic
/// Fisher-matrix workhorse for likelihood models (expected metric
/// diag(1/sigma^2, 2/sigma^2)).
inline ParametricModel make_gaussian_likelihood_model() {
  ParametricModel m;
  m.name = "gaussian_likelihood";
  m.param_dim = 2;
  m.sample_space = ContinuousInterval{-20.0, 20.0};
  m.log_density = [](double x, const Eigen::VectorXd& th) {
    const double z = (x - th[0]) / th[1];
    return -0.5 * z * z - std::log(th[1]) - 0.5 * std::log(2.0 * M_PI);
  };
  m.score = [](double x, const Eigen::VectorXd& th) {
    const double mu = th[0], sigma = th[1];
    const double d = x - mu;
    Eigen::VectorXd s(2);
    s[0] = d / (sigma * sigma);
    s[1] = (d * d - sigma * sigma) / (sigma * sigma * sigma);
    return s;
  };
  m.sampler = [](SeededRng& rng, const Eigen::VectorXd& th) {
    return th[0] + th[1] * rng.normal();
  };
  return m;
}

inline ParametricModel make_builtin_model(const std::string& name) {
  if (name == "bernoulli") return make_bernoulli_model();
  if (name == "gaussian_mean") return make_gaussian_mean_model();
  if (name == "exponential_rate") return make_exponential_rate_model();
  if (name == "gaussian_likelihood") return make_gaussian_likelihood_model();
  throw ConfigError("unknown model name: " + name);
}

inline std::vector<std::string> builtin_model_names() {
  return {"bernoulli", "gaussian_mean", "exponential_rate",
          "gaussian_likelihood"};
}

}  // namespace lambdaclock
