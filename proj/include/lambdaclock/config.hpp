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

#include <string>

#include "lambdaclock/errors.hpp"

namespace lambdaclock {

/// Physical constants. Natural units by default (hbar = 1); every operation
/// that involves hbar reads it from here, so the hbar-dependence of derived
/// quantities stays testable.
struct PhysicalConstants {
  double hbar = 1.0;
};

/// Global numerical tolerances. No operation hard-codes its own epsilon;
/// everything tunable lives here.
struct NumericalConfig {
  /// Relative step for central finite differences of log-densities.
  double fd_step = 1e-6;
  /// Relative eigenvalue floor (w.r.t. trace) below which spectral weight is
  /// treated as absent.
  double eig_cutoff = 1e-12;
  /// Threshold on the energy spread below which an informational path
  /// parameter is declared invalid for the trajectory.
  double degeneracy_eps = 1e-10;
  /// Total node budget for fixed-order composite quadrature.
  int quad_points = 257;
  /// Relative tolerance for path-length refinement.
  double integ_refine_tol = 1e-9;
};

inline void validate(const PhysicalConstants& constants) {
  if (!(constants.hbar > 0.0)) {
    throw ConfigError("hbar must be strictly positive");
  }
}

inline void validate(const NumericalConfig& cfg) {
  if (!(cfg.fd_step > 0.0) || cfg.fd_step >= 1e-2) {
    throw ConfigError("fd_step must lie in (0, 1e-2)");
  }
  if (!(cfg.eig_cutoff > 0.0) || cfg.eig_cutoff >= 1e-6) {
    throw ConfigError("eig_cutoff must lie in (0, 1e-6)");
  }
  if (!(cfg.degeneracy_eps > 0.0)) {
    throw ConfigError("degeneracy_eps must be strictly positive");
  }
  if (cfg.quad_points < 2) {
    throw ConfigError("quad_points must be at least 2");
  }
  if (!(cfg.integ_refine_tol > 0.0)) {
    throw ConfigError("integ_refine_tol must be strictly positive");
  }
}

/// Documented defaults used across the toolkit and the CLI.
inline NumericalConfig default_config() { return NumericalConfig{}; }

inline PhysicalConstants default_constants() { return PhysicalConstants{}; }

}  // namespace lambdaclock
