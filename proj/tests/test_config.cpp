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

#include "lambdaclock/config.hpp"
#include "lambdaclock/dynamics.hpp"
#include "lambdaclock/quantum_geometry.hpp"

using namespace lambdaclock;

TEST_CASE("defaults validate") {
  REQUIRE_NOTHROW(validate(default_config()));
  REQUIRE_NOTHROW(validate(default_constants()));
  const NumericalConfig cfg = default_config();
  CHECK(cfg.fd_step == 1e-6);
  CHECK(cfg.eig_cutoff == 1e-12);
  CHECK(cfg.degeneracy_eps == 1e-10);
  CHECK(cfg.quad_points == 257);
  CHECK(cfg.integ_refine_tol == 1e-9);
  CHECK(default_constants().hbar == 1.0);
}

TEST_CASE("bad numeric settings are rejected") {
  NumericalConfig cfg = default_config();
  SECTION("fd_step zero") {
    cfg.fd_step = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
  SECTION("fd_step too coarse") {
    cfg.fd_step = 1e-2;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
  SECTION("eig_cutoff nonpositive") {
    cfg.eig_cutoff = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
  SECTION("eig_cutoff too coarse") {
    cfg.eig_cutoff = 1e-5;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
  SECTION("degeneracy_eps nonpositive") {
    cfg.degeneracy_eps = -1.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
  SECTION("quad_points too small") {
    cfg.quad_points = 1;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
  SECTION("integ_refine_tol nonpositive") {
    cfg.integ_refine_tol = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
}

TEST_CASE("nonpositive hbar is rejected") {
  PhysicalConstants constants;
  constants.hbar = 0.0;
  CHECK_THROWS_AS(validate(constants), ConfigError);
  constants.hbar = -1.0;
  CHECK_THROWS_AS(validate(constants), ConfigError);
}

TEST_CASE("doubling hbar halves the accumulated distinguishability rate") {
  // Fixed generator and state; only the constant changes.
  MatrixXc h(2, 2);
  h << Complex(0.5, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0),
      Complex(-0.5, 0.0);
  const HermitianOperator ham = make_hermitian_operator(h);
  VectorXc amps(2);
  amps << Complex(1.0 / std::sqrt(2.0), 0.0), Complex(1.0 / std::sqrt(2.0), 0.0);
  const PureState psi0 = make_pure_state(amps);
  const std::vector<double> grid = linspace(0.0, 1.0, 65);

  PhysicalConstants c1;
  c1.hbar = 1.0;
  PhysicalConstants c2;
  c2.hbar = 2.0;
  const NumericalConfig cfg = default_config();

  const double l1 = fs_path_length(
      evolve_unitary(UnitaryEvolutionSpec{ham, psi0, grid}, c1), cfg);
  const double l2 = fs_path_length(
      evolve_unitary(UnitaryEvolutionSpec{ham, psi0, grid}, c2), cfg);
  CHECK(l2 == Catch::Approx(0.5 * l1).epsilon(1e-12));
}
