// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "types.hpp"

namespace fc {

struct KMeansResult {
  Eigen::MatrixXd centroids;          // K x d
  std::vector<index_t> assignment;    // per input row, in [0, K)
  std::vector<double> inertia_trace;  // WCSS at each assignment step
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding.
//
// Determinism contract: all randomness comes from `seed`; distances are
// accumulated coordinate-by-coordinate in index order so assignments are
// bit-identical to a plain nested-loop scan (and to the parallel path,
// which only distributes rows across threads).
//
// Ties break to the lowest centroid index. An empty cluster is reseeded
// to the unclaimed point farthest from its assigned centroid. Iteration
// stops when the max centroid shift drops below tol (or at max_iter).
KMeansResult kmeans(const Eigen::MatrixXd& X, index_t K, std::uint64_t seed,
                    int max_iter, double tol);

// Squared Euclidean distance with fixed accumulation order; shared by
// kmeans and quantize so their scans agree bit-for-bit.
inline double sqdist(const Eigen::MatrixXd& A, index_t i,
                     const Eigen::MatrixXd& B, index_t j) {
  double d = 0.0;
  for (index_t c = 0; c < A.cols(); ++c) {
    const double diff = A(i, c) - B(j, c);
    d += diff * diff;
  }
  return d;
}

}  // namespace fc
