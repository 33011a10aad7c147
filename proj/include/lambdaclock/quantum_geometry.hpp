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
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "lambdaclock/config.hpp"
#include "lambdaclock/errors.hpp"
#include "lambdaclock/numerics.hpp"

namespace lambdaclock {

using Complex = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

/// State vectors must be normalized, operators Hermitian, to this tolerance.
inline constexpr double state_tol = 1e-12;
/// Density-operator eigenvalues may undershoot zero by at most this much.
inline constexpr double psd_tol = 1e-10;
/// Validated inputs that must be traceless (or trace-one) use this tolerance.
inline constexpr double trace_tol = 1e-10;
/// Consecutive trajectory samples must overlap at least this much for the
/// discrete chord to approximate the arc.
inline constexpr double min_step_overlap = 0.9;
/// Richardson extrapolation across a coarsened sample grid is applied only
/// when the fine and coarse sums already agree this well.
inline constexpr double richardson_guard = 0.02;

/// Normalized complex amplitude vector.
struct PureState {
  VectorXc amplitudes;
  int dim() const { return static_cast<int>(amplitudes.size()); }
};

inline PureState make_pure_state(VectorXc amplitudes) {
  const double n2 = amplitudes.squaredNorm();
  if (std::abs(n2 - 1.0) > state_tol) {
    throw NonNormalizedDensity("pure state norm^2 = " + std::to_string(n2));
  }
  return PureState{std::move(amplitudes)};
}

inline PureState normalized_state(const VectorXc& amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw NonNormalizedDensity("cannot normalize the zero vector");
  return PureState{amplitudes / n};
}

/// Hermitian, positive-semidefinite, unit-trace complex matrix.
struct DensityOperator {
  MatrixXc matrix;
  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Observable (the Hamiltonian lives here).
struct HermitianOperator {
  MatrixXc matrix;
  int dim() const { return static_cast<int>(matrix.rows()); }
};

inline void require_hermitian(const MatrixXc& m, const std::string& what,
                              double tol = state_tol) {
  if (m.rows() != m.cols()) throw DimensionMismatch(what + " is not square");
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw NotHermitian(what + " deviates from Hermiticity by " +
                       std::to_string(dev));
  }
}

inline HermitianOperator make_hermitian_operator(MatrixXc matrix) {
  require_hermitian(matrix, "operator");
  return HermitianOperator{std::move(matrix)};
}

inline DensityOperator make_density_operator(MatrixXc matrix) {
  require_hermitian(matrix, "density operator");
  const double tr = matrix.trace().real();
  if (std::abs(tr - 1.0) > state_tol) {
    throw TraceNotPreserved("density operator trace = " + std::to_string(tr));
  }
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -psd_tol) {
    throw NonNormalizedDensity("density operator has eigenvalue " +
                               std::to_string(es.eigenvalues().minCoeff()));
  }
  return DensityOperator{std::move(matrix)};
}

inline DensityOperator pure_to_density(const PureState& psi) {
  return DensityOperator{psi.amplitudes * psi.amplitudes.adjoint()};
}

/// Ordered pure-state samples along one parameter (external time or a
/// generic label).
struct PureStateTrajectory {
  std::vector<double> times;
  std::vector<PureState> states;
  std::string label = "t";
};

/// Ordered density-operator samples along one parameter.
struct DensityTrajectory {
  std::vector<double> times;
  std::vector<DensityOperator> states;
  std::string label = "theta";
};

namespace detail {

template <typename Traj>
void check_trajectory(const Traj& traj) {
  if (traj.times.size() != traj.states.size()) {
    throw DimensionMismatch("trajectory label/state counts differ");
  }
  if (traj.times.size() < 2) {
    throw TooFewSamples("trajectory needs at least 2 samples");
  }
  if (!strictly_increasing(traj.times)) {
    throw NonMonotoneSamples("trajectory labels must be strictly increasing");
  }
}

}  // namespace detail

/// Fubini-Study line element 2 sqrt(<dpsi|dpsi> - |<psi|dpsi>|^2), invariant
/// under local phase changes of psi.
inline double fs_line_element(const PureState& psi, const VectorXc& dpsi) {
  if (dpsi.size() != psi.amplitudes.size()) {
    throw DimensionMismatch("dpsi dimension does not match the state");
  }
  const double dd = dpsi.squaredNorm();
  const Complex pd = psi.amplitudes.dot(dpsi);
  const double val = dd - std::norm(pd);
  return 2.0 * std::sqrt(std::max(val, 0.0));
}

/// Energy spread Delta H = sqrt(<H^2> - <H>^2), clamped at zero.
inline double energy_variance(const PureState& psi, const HermitianOperator& h) {
  if (h.matrix.rows() != psi.amplitudes.size()) {
    throw DimensionMismatch("operator dimension does not match the state");
  }
  const VectorXc hpsi = h.matrix * psi.amplitudes;
  const double mean = psi.amplitudes.dot(hpsi).real();
  const double second = hpsi.squaredNorm();
  return std::sqrt(std::max(second - mean * mean, 0.0));
}

/// Quantum Fisher information for unitary time encoding, 4 (Delta H)^2 / hbar^2.
inline double qfi_unitary(const PureState& psi, const HermitianOperator& h,
                          const PhysicalConstants& constants) {
  const double dh = energy_variance(psi, h);
  return 4.0 * dh * dh / (constants.hbar * constants.hbar);
}

/// Mixed-state quantum Fisher information from the symmetric logarithmic
/// derivative: F = 2 sum_{ij} |<i|drho|j>|^2 / (lambda_i + lambda_j), with
/// eigenvalue pairs below the spectral cutoff excluded.
inline double qfi_sld(const DensityOperator& rho, const MatrixXc& drho,
                      const NumericalConfig& cfg) {
  if (drho.rows() != rho.matrix.rows() || drho.cols() != rho.matrix.cols()) {
    throw DimensionMismatch("drho dimension does not match rho");
  }
  require_hermitian(drho, "drho", trace_tol);
  if (std::abs(drho.trace()) > trace_tol) {
    throw TraceNotPreserved("drho trace = " +
                            std::to_string(std::abs(drho.trace())));
  }
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho.matrix);
  const Eigen::VectorXd lam = es.eigenvalues();
  const MatrixXc m = es.eigenvectors().adjoint() * drho * es.eigenvectors();
  const double cutoff = cfg.eig_cutoff * rho.matrix.trace().real();
  const int n = rho.dim();
  double f = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double denom = lam[i] + lam[j];
      if (denom > cutoff) f += 2.0 * std::norm(m(i, j)) / denom;
    }
  }
  return f;
}

/// Per-step Fubini-Study increments 2 arccos |<psi_k|psi_{k+1}>| (the
/// gauge-invariant chord), cumulative along the trajectory. Element k is the
/// accumulated length up to sample k; element 0 is zero.
inline std::vector<double> fs_cumulative_lengths(const PureStateTrajectory& traj) {
  detail::check_trajectory(traj);
  std::vector<double> acc(traj.states.size(), 0.0);
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
    const Complex ov = traj.states[k].amplitudes.dot(traj.states[k + 1].amplitudes);
    const double a = std::abs(ov);
    if (a <= min_step_overlap) {
      throw UndersampledTrajectory(
          "consecutive overlap " + std::to_string(a) + " at step " +
          std::to_string(k) + " is too small for the chord approximation");
    }
    // 2 acos(a) evaluated as 4 asin(|psi_k - e^{-i arg ov} psi_{k+1}| / 2):
    // the same angle, but acos this close to 1 would surrender half the
    // significant digits, and the gauge-aligned difference vector keeps them.
    const double chord =
        (traj.states[k].amplitudes -
         (std::conj(ov) / a) * traj.states[k + 1].amplitudes)
            .norm();
    acc[k + 1] = acc[k] + 4.0 * std::asin(std::min(0.5 * chord, 1.0));
  }
  return acc;
}

/// Fubini-Study path length: the sum of the gauge-invariant per-step chords.
/// Exactly additive over concatenated subpaths and independent of how the
/// samples are labeled; its accuracy is set by the sampling density, which
/// the overlap precondition keeps in the convergent regime.
inline double fs_path_length(const PureStateTrajectory& traj,
                             const NumericalConfig&) {
  return fs_cumulative_lengths(traj).back();
}

/// Bures path length: per-segment midpoint evaluation of
/// (1/2) sqrt(F_Q(rho_mid, slope)) * dtheta on the convex interpolation
/// between consecutive samples, refined by one Richardson step across a
/// coarsened sample grid when enough samples are available and the coarse
/// and fine sums already agree to a few percent (the asymptotic regime).
inline double bures_path_length(const DensityTrajectory& traj,
                                const NumericalConfig& cfg) {
  detail::check_trajectory(traj);
  const auto stride_sum = [&](std::size_t stride) {
    double total = 0.0;
    std::size_t a = 0;
    while (a + 1 < traj.states.size()) {
      const std::size_t b = std::min(a + stride, traj.states.size() - 1);
      const double dth = traj.times[b] - traj.times[a];
      const MatrixXc slope = (traj.states[b].matrix - traj.states[a].matrix) / dth;
      const DensityOperator mid{
          0.5 * (traj.states[a].matrix + traj.states[b].matrix)};
      total += 0.5 * std::sqrt(qfi_sld(mid, slope, cfg)) * dth;
      a = b;
    }
    return total;
  };
  const double fine = stride_sum(1);
  if (traj.states.size() >= 5) {
    const double coarse = stride_sum(2);
    if (std::abs(fine - coarse) <=
        richardson_guard * std::max(std::abs(fine), 1e-300)) {
      return fine + (fine - coarse) / 3.0;
    }
  }
  return fine;
}

}  // namespace lambdaclock
