// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "types.hpp"

namespace fc {

struct FactorPair {
  Eigen::MatrixXd U;  // rows x k_star, entry-wise >= 0
  Eigen::MatrixXd V;  // k_star x cols, entry-wise >= 0
  index_t k_star = 0;
  std::vector<double> cost_trace;  // ||M - UV||_F^2 after each update sweep
  int iterations = 0;
  double final_cost = 0.0;
  bool converged = false;
};

// Lee-Seung multiplicative updates for min ||M - UV||_F^2.
//
// Init: U then V filled row-major with uniform(0.1, 1.1) draws from
// `seed` (strictly positive, so no entry is pinned at zero). Each sweep
// updates U with V fixed, then V with the new U; denominators get +1e-12.
// The trace records the cost after each sweep (the random initial cost is
// not an iterate). Stops when (prev - cost) / max(prev, 1e-30) < rel_tol,
// or after max_iter sweeps.
//
// Errors: invalid_rank unless 1 <= k_star < min(rows, cols);
// negative_input if M has a negative or non-finite entry; numeric if the
// cost ever becomes non-finite.
FactorPair nmf_factorize(const Eigen::MatrixXd& M, index_t k_star,
                         std::uint64_t seed, int max_iter, double rel_tol);

// sum_ij (M_ij - (UV)_ij)^2; dimension error on shape mismatch.
double reconstruction_error(const Eigen::MatrixXd& M, const FactorPair& f);

}  // namespace fc
