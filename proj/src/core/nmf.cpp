// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include "nmf.hpp"

#include <cmath>

#include "rng.hpp"

namespace fc {

namespace {

constexpr double kEps = 1e-12;

double cost_of(const Eigen::MatrixXd& M, const Eigen::MatrixXd& U,
               const Eigen::MatrixXd& V) {
  return (M - U * V).squaredNorm();
}

}  // namespace

FactorPair nmf_factorize(const Eigen::MatrixXd& M, index_t k_star,
                         std::uint64_t seed, int max_iter, double rel_tol) {
  const index_t rows = M.rows(), cols = M.cols();
  if (k_star < 1 || k_star >= std::min(rows, cols))
    fail(errkind::invalid_rank,
         "nmf_factorize: k*=" + std::to_string(k_star) +
             " outside [1, min(" + std::to_string(rows) + ", " +
             std::to_string(cols) + "))");
  if (max_iter < 1)
    fail(errkind::invalid_argument, "nmf_factorize: max_iter must be >= 1");
  for (index_t i = 0; i < rows; ++i)
    for (index_t j = 0; j < cols; ++j) {
      const double v = M(i, j);
      if (!(v >= 0.0) || !std::isfinite(v))
        fail(errkind::negative_input,
             "nmf_factorize: M(" + std::to_string(i) + ", " +
                 std::to_string(j) + ") = " + std::to_string(v) +
                 " is negative or non-finite");
    }

  FactorPair f;
  f.k_star = k_star;
  f.U = Eigen::MatrixXd(rows, k_star);
  f.V = Eigen::MatrixXd(k_star, cols);
  rng r(seed);
  for (index_t i = 0; i < rows; ++i)
    for (index_t j = 0; j < k_star; ++j) f.U(i, j) = r.uniform(0.1, 1.1);
  for (index_t i = 0; i < k_star; ++i)
    for (index_t j = 0; j < cols; ++j) f.V(i, j) = r.uniform(0.1, 1.1);

  double prev = cost_of(M, f.U, f.V);
  for (int iter = 0; iter < max_iter; ++iter) {
    // U <- U .* (M V^T) ./ (U V V^T), then V with the fresh U
    {
      const Eigen::MatrixXd num = M * f.V.transpose();
      const Eigen::MatrixXd den = f.U * (f.V * f.V.transpose());
      f.U = (f.U.array() * num.array() / (den.array() + kEps)).matrix();
    }
    {
      const Eigen::MatrixXd num = f.U.transpose() * M;
      const Eigen::MatrixXd den = (f.U.transpose() * f.U) * f.V;
      f.V = (f.V.array() * num.array() / (den.array() + kEps)).matrix();
    }
    const double cost = cost_of(M, f.U, f.V);
    if (!std::isfinite(cost))
      fail(errkind::numeric,
           "nmf_factorize: cost diverged at iteration " + std::to_string(iter));
    f.cost_trace.push_back(cost);
    f.iterations = iter + 1;
    if ((prev - cost) / std::max(prev, 1e-30) < rel_tol) {
      f.converged = true;
      prev = cost;
      break;
    }
    prev = cost;
  }
  f.final_cost = prev;
  return f;
}

double reconstruction_error(const Eigen::MatrixXd& M, const FactorPair& f) {
  if (f.U.rows() != M.rows() || f.V.cols() != M.cols() ||
      f.U.cols() != f.V.rows())
    fail(errkind::dimension, "reconstruction_error: factor shapes disagree with M");
  return cost_of(M, f.U, f.V);
}

}  // namespace fc
