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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "lambdaclock/numerics.hpp"
#include "lambdaclock/quantum_geometry.hpp"

using namespace lambdaclock;

namespace {

const Complex I(0.0, 1.0);

VectorXc random_amplitudes(SeededRng& rng, int dim) {
  VectorXc v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(rng.normal(), rng.normal());
  return v;
}

MatrixXc random_hermitian(SeededRng& rng, int dim) {
  MatrixXc a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
  }
  return 0.5 * (a + a.adjoint().eval());
}

HermitianOperator qubit_z(double omega, double hbar) {
  MatrixXc h = MatrixXc::Zero(2, 2);
  h(0, 0) = 0.5 * hbar * omega;
  h(1, 1) = -0.5 * hbar * omega;
  return make_hermitian_operator(h);
}

PureState plus_x() {
  VectorXc v(2);
  v[0] = 1.0 / std::sqrt(2.0);
  v[1] = 1.0 / std::sqrt(2.0);
  return make_pure_state(v);
}

// Free evolution of |+x> under the qubit generator, written in closed form.
PureState precessed(double omega, double t) {
  VectorXc v(2);
  v[0] = std::exp(-I * (0.5 * omega * t)) / std::sqrt(2.0);
  v[1] = std::exp(I * (0.5 * omega * t)) / std::sqrt(2.0);
  return make_pure_state(v);
}

DensityOperator depolarized(const PureState& psi, double r) {
  const int d = psi.dim();
  const MatrixXc proj = psi.amplitudes * psi.amplitudes.adjoint();
  return make_density_operator(r * proj + (1.0 - r) / d *
                                              MatrixXc::Identity(d, d));
}

}  // namespace

TEST_CASE("state constructors validate their input") {
  VectorXc v(2);
  v[0] = 1.0;
  v[1] = 1.0;
  CHECK_THROWS_AS(make_pure_state(v), NonNormalizedDensity);
  CHECK_NOTHROW(normalized_state(v));
  CHECK_THROWS_AS(normalized_state(VectorXc::Zero(3)), NonNormalizedDensity);

  MatrixXc m = MatrixXc::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 0.6;
  CHECK_THROWS_AS(make_density_operator(m), TraceNotPreserved);
  m(1, 1) = 0.5;
  m(0, 1) = Complex(0.0, 0.3);
  CHECK_THROWS_AS(make_density_operator(m), NotHermitian);
  m(1, 0) = Complex(0.0, -0.3);
  CHECK_NOTHROW(make_density_operator(m));
  m(0, 1) = 0.7;
  m(1, 0) = 0.7;
  CHECK_THROWS_AS(make_density_operator(m), NonNormalizedDensity);
  CHECK_THROWS_AS(make_hermitian_operator(MatrixXc::Zero(2, 3)),
                  DimensionMismatch);
}

TEST_CASE("line element is gauge invariant") {
  SeededRng rng(42);
  for (int k = 0; k < 100; ++k) {
    const int dim = 2 + static_cast<int>(3.0 * rng.uniform01());
    const PureState psi = normalized_state(random_amplitudes(rng, dim));
    const VectorXc dpsi = 0.01 * random_amplitudes(rng, dim);
    const double base = fs_line_element(psi, dpsi);

    const double alpha = 6.0 * (rng.uniform01() - 0.5);
    const double beta = 2.0 * (rng.uniform01() - 0.5);
    const Complex phase = std::exp(I * alpha);
    const PureState psi2 = make_pure_state(phase * psi.amplitudes);
    const VectorXc dpsi2 = phase * (dpsi + I * beta * psi.amplitudes);
    CHECK(std::abs(fs_line_element(psi2, dpsi2) - base) <= 1e-10);
  }
  const PureState psi = plus_x();
  CHECK_THROWS_AS(fs_line_element(psi, VectorXc::Zero(3)), DimensionMismatch);
}

TEST_CASE("energy spread and unitary information for the precessing qubit") {
  const PhysicalConstants constants = default_constants();
  for (double omega : {0.5, 1.0, 3.0}) {
    const HermitianOperator h = qubit_z(omega, constants.hbar);
    const PureState psi = plus_x();
    CHECK(std::abs(energy_variance(psi, h) - 0.5 * constants.hbar * omega) <=
          1e-12 * omega);
    CHECK(std::abs(qfi_unitary(psi, h, constants) - omega * omega) <=
          1e-12 * omega * omega);
  }
  VectorXc up(2);
  up[0] = 1.0;
  up[1] = 0.0;
  CHECK(energy_variance(make_pure_state(up), qubit_z(1.0, 1.0)) <= 1e-12);
  CHECK_THROWS_AS(energy_variance(plus_x(), make_hermitian_operator(
                                                MatrixXc::Identity(3, 3))),
                  DimensionMismatch);
}

TEST_CASE("SLD information reproduces the rank-1 case") {
  SeededRng rng(314159);
  const NumericalConfig cfg = default_config();
  const PhysicalConstants constants = default_constants();
  for (int k = 0; k < 50; ++k) {
    const int dim = 2 + static_cast<int>(3.0 * rng.uniform01());
    const PureState psi = normalized_state(random_amplitudes(rng, dim));
    const HermitianOperator h =
        make_hermitian_operator(random_hermitian(rng, dim));
    const DensityOperator rho = pure_to_density(psi);
    const MatrixXc drho = -I / constants.hbar *
                          (h.matrix * rho.matrix - rho.matrix * h.matrix);
    const double f_pure = qfi_unitary(psi, h, constants);
    const double f_sld = qfi_sld(rho, drho, cfg);
    CHECK(std::abs(f_sld - f_pure) <= 1e-8 * std::max(1.0, f_pure));
  }
}

TEST_CASE("SLD information on depolarized qubit states") {
  const NumericalConfig cfg = default_config();
  const PhysicalConstants constants = default_constants();
  const double omega = 1.0;
  const HermitianOperator h = qubit_z(omega, constants.hbar);
  for (double r : {0.25, 0.5, 0.9}) {
    const DensityOperator rho = depolarized(plus_x(), r);
    const MatrixXc drho = -I / constants.hbar *
                          (h.matrix * rho.matrix - rho.matrix * h.matrix);
    const double expected = r * r * omega * omega;
    CHECK(std::abs(qfi_sld(rho, drho, cfg) - expected) <= 1e-10 * expected);
  }
}

TEST_CASE("SLD information validates its input") {
  const NumericalConfig cfg = default_config();
  const DensityOperator rho = depolarized(plus_x(), 0.5);
  MatrixXc bad = MatrixXc::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(qfi_sld(rho, bad, cfg), NotHermitian);
  CHECK_THROWS_AS(qfi_sld(rho, MatrixXc::Identity(2, 2), cfg),
                  TraceNotPreserved);
  CHECK_THROWS_AS(qfi_sld(rho, MatrixXc::Zero(3, 3), cfg), DimensionMismatch);
}

TEST_CASE("accumulated length of the precessing qubit is omega times t") {
  const double omega = 2.0;
  const int n = 257;
  PureStateTrajectory traj;
  for (int k = 0; k < n; ++k) {
    const double t = 1.5 * k / (n - 1);
    traj.times.push_back(t);
    traj.states.push_back(precessed(omega, t));
  }
  const std::vector<double> acc = fs_cumulative_lengths(traj);
  REQUIRE(acc.size() == traj.states.size());
  CHECK(acc.front() == 0.0);
  for (int k = 0; k < n; ++k) {
    CHECK(std::abs(acc[k] - omega * traj.times[k]) <= 1e-12 * omega * 1.5);
  }
  CHECK(std::abs(fs_path_length(traj, default_config()) - omega * 1.5) <=
        1e-12);
}

TEST_CASE("coarse sampling of a fast path is rejected") {
  PureStateTrajectory traj;
  traj.times = {0.0, 1.0};
  traj.states = {precessed(1.0, 0.0), precessed(1.0, M_PI / 2.0)};
  CHECK_THROWS_AS(fs_cumulative_lengths(traj), UndersampledTrajectory);
}

TEST_CASE("accumulated length ignores labels and is additive") {
  const double omega = 1.0;
  PureStateTrajectory traj, relabeled;
  for (int k = 0; k < 9; ++k) {
    const double t = 0.8 * k / 8.0;
    traj.times.push_back(t);
    relabeled.times.push_back(t * t * t + static_cast<double>(k));
    traj.states.push_back(precessed(omega, t));
    relabeled.states.push_back(precessed(omega, t));
  }
  const NumericalConfig cfg = default_config();
  CHECK(fs_path_length(relabeled, cfg) == fs_path_length(traj, cfg));

  PureStateTrajectory head, tail;
  head.times.assign(traj.times.begin(), traj.times.begin() + 5);
  head.states.assign(traj.states.begin(), traj.states.begin() + 5);
  tail.times.assign(traj.times.begin() + 4, traj.times.end());
  tail.states.assign(traj.states.begin() + 4, traj.states.end());
  CHECK(std::abs(fs_path_length(head, cfg) + fs_path_length(tail, cfg) -
                 fs_path_length(traj, cfg)) <= 1e-15);
}

TEST_CASE("trajectory validation") {
  PureStateTrajectory traj;
  traj.times = {0.0};
  traj.states = {plus_x()};
  CHECK_THROWS_AS(fs_cumulative_lengths(traj), TooFewSamples);
  traj.times = {0.0, 0.0};
  traj.states = {plus_x(), plus_x()};
  CHECK_THROWS_AS(fs_cumulative_lengths(traj), NonMonotoneSamples);
  traj.times = {0.0, 1.0, 2.0};
  CHECK_THROWS_AS(fs_cumulative_lengths(traj), DimensionMismatch);
}

TEST_CASE("mixed-state length halves the pure-state length on embeddings") {
  const NumericalConfig cfg = default_config();
  const double omega = 1.0;
  const int n = 513;
  PureStateTrajectory pure;
  DensityTrajectory embedded;
  DensityTrajectory blurred;
  for (int k = 0; k < n; ++k) {
    const double t = 1.0 * k / (n - 1);
    const PureState psi = precessed(omega, t);
    pure.times.push_back(t);
    pure.states.push_back(psi);
    embedded.times.push_back(t);
    embedded.states.push_back(pure_to_density(psi));
    blurred.times.push_back(t);
    blurred.states.push_back(depolarized(psi, 0.5));
  }
  const double fs = fs_path_length(pure, cfg);
  const double bures = bures_path_length(embedded, cfg);
  CHECK(std::abs(bures - 0.5 * fs) <= 1e-9);
  // Constant information rate r^2 omega^2 integrates to r*omega*T/2.
  const double expected = 0.5 * 0.5 * omega * 1.0;
  CHECK(std::abs(bures_path_length(blurred, cfg) - expected) <= 1e-9);
}
