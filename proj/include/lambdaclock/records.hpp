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
#include <string>
#include <utility>
#include <vector>

#include "lambdaclock/config.hpp"
#include "lambdaclock/errors.hpp"
#include "lambdaclock/quantum_geometry.hpp"

namespace lambdaclock {

/// An ordered chain of density operators rho_0 ... rho_K, the raw material
/// for the record-based informational parameter.
struct RecordSequence {
  std::vector<DensityOperator> states;
};

inline RecordSequence make_record_sequence(std::vector<DensityOperator> states) {
  if (states.size() < 2) {
    throw TooFewSamples("a record sequence needs at least 2 states");
  }
  const Eigen::Index dim = states.front().matrix.rows();
  for (const auto& rho : states) {
    if (rho.matrix.rows() != dim) {
      throw DimensionMismatch("record states must share a dimension");
    }
  }
  return RecordSequence{std::move(states)};
}

/// Relative entropy D(rho||sigma) = Tr[rho (ln rho - ln sigma)], evaluated
/// through the two eigendecompositions. Eigenvalues at or below eig_cutoff
/// are treated as outside the support; rho carrying more than roundoff weight
/// outside sigma's support means the states are perfectly distinguishable,
/// reported as SupportViolation rather than an infinity.
inline double relative_entropy(const DensityOperator& rho,
                               const DensityOperator& sigma,
                               const NumericalConfig& cfg) {
  if (rho.matrix.rows() != sigma.matrix.rows()) {
    throw DimensionMismatch("relative entropy needs equal dimensions");
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXc> rho_eig(rho.matrix);
  const Eigen::SelfAdjointEigenSolver<MatrixXc> sigma_eig(sigma.matrix);
  const Eigen::VectorXd& p = rho_eig.eigenvalues();
  const Eigen::VectorXd& q = sigma_eig.eigenvalues();

  double tr_rho_ln_rho = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > cfg.eig_cutoff) tr_rho_ln_rho += p[i] * std::log(p[i]);
  }

  // Diagonal of rho in sigma's eigenbasis: weight_j = <v_j| rho |v_j>.
  const MatrixXc& v = sigma_eig.eigenvectors();
  const MatrixXc rho_in_sigma_basis = v.adjoint() * rho.matrix * v;
  double tr_rho_ln_sigma = 0.0;
  double outside_mass = 0.0;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    const double weight = rho_in_sigma_basis(j, j).real();
    if (q[j] > cfg.eig_cutoff) {
      tr_rho_ln_sigma += weight * std::log(q[j]);
    } else if (weight > 0.0) {
      outside_mass += weight;
    }
  }
  if (outside_mass > cfg.eig_cutoff) {
    throw SupportViolation(
        "state has weight " + std::to_string(outside_mass) +
        " outside the reference support: infinite distinguishability");
  }
  // Klein's inequality guarantees nonnegativity; clip the negative roundoff
  // tail that the two independent eigendecompositions can leave behind.
  return std::max(0.0, tr_rho_ln_rho - tr_rho_ln_sigma);
}

/// Partial sums of the record parameter: entry k holds
/// sum_{j<=k} D(rho_j || rho_{j-1}), with entry 0 equal to 0.
inline std::vector<double> record_partial_sums(const RecordSequence& seq,
                                               const NumericalConfig& cfg) {
  std::vector<double> sums;
  sums.reserve(seq.states.size());
  sums.push_back(0.0);
  for (std::size_t k = 1; k < seq.states.size(); ++k) {
    double term = 0.0;
    try {
      term = relative_entropy(seq.states[k], seq.states[k - 1], cfg);
    } catch (const SupportViolation& err) {
      throw SupportViolation(std::string(err.what()) + " (record index " +
                                 std::to_string(k) + ")",
                             static_cast<long>(k));
    }
    sums.push_back(sums.back() + term);
  }
  return sums;
}

/// Record-based informational parameter: the total accumulated
/// distinguishability of the chain.
inline double record_lambda(const RecordSequence& seq,
                            const NumericalConfig& cfg) {
  return record_partial_sums(seq, cfg).back();
}

}  // namespace lambdaclock
