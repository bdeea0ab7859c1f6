// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include "kmeans.hpp"

#include <limits>
#include <vector>

#include "parallel.hpp"
#include "rng.hpp"

namespace fc {

namespace {

// Nearest centroid of row i, lowest index on ties.
index_t nearest(const Eigen::MatrixXd& X, index_t i, const Eigen::MatrixXd& C,
                double* dist_out) {
  index_t best = 0;
  double best_d = sqdist(X, i, C, 0);
  for (index_t c = 1; c < C.rows(); ++c) {
    const double d = sqdist(X, i, C, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist_out) *dist_out = best_d;
  return best;
}

// k-means++: first center uniform; each next center found by one uniform
// draw walked along the prefix sums of the squared distances to the
// nearest chosen center. A zero total (all points duplicated onto chosen
// centers) falls back to a uniform index.
Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& X, index_t K, rng& r) {
  const index_t n = X.rows();
  Eigen::MatrixXd C(K, X.cols());
  C.row(0) = X.row(static_cast<index_t>(r.uniform_int(static_cast<std::uint64_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n),
                         std::numeric_limits<double>::infinity());
  for (index_t k = 1; k < K; ++k) {
    double total = 0.0;
    for (index_t i = 0; i < n; ++i) {
      const double d = sqdist(X, i, C, k - 1);
      if (d < d2[static_cast<std::size_t>(i)]) d2[static_cast<std::size_t>(i)] = d;
      total += d2[static_cast<std::size_t>(i)];
    }
    index_t pick;
    if (total > 0.0) {
      const double target = r.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (index_t i = 0; i < n; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<index_t>(r.uniform_int(static_cast<std::uint64_t>(n)));
    }
    C.row(k) = X.row(pick);
  }
  return C;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& X, index_t K, std::uint64_t seed,
                    int max_iter, double tol) {
  const index_t n = X.rows();
  if (K < 1) fail(errkind::invalid_argument, "kmeans: K must be >= 1");
  if (n < K)
    fail(errkind::insufficient_data,
         "kmeans: " + std::to_string(n) + " points for K=" + std::to_string(K));
  if (max_iter < 1)
    fail(errkind::invalid_argument, "kmeans: max_iter must be >= 1");

  rng r(seed);
  KMeansResult res;
  res.centroids = seed_centroids(X, K, r);
  res.assignment.assign(static_cast<std::size_t>(n), 0);

  std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    // assignment step (row-parallel; result independent of thread count)
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      res.assignment[i] = nearest(X, static_cast<index_t>(i), res.centroids,
                                  &dist[i]);
    });
    double wcss = 0.0;
    for (index_t i = 0; i < n; ++i) wcss += dist[static_cast<std::size_t>(i)];
    res.inertia_trace.push_back(wcss);
    res.iterations = iter + 1;

    // update step
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(K, X.cols());
    std::vector<index_t> counts(static_cast<std::size_t>(K), 0);
    for (index_t i = 0; i < n; ++i) {
      next.row(res.assignment[static_cast<std::size_t>(i)]) += X.row(i);
      ++counts[static_cast<std::size_t>(res.assignment[static_cast<std::size_t>(i)])];
    }
    for (index_t k = 0; k < K; ++k)
      if (counts[static_cast<std::size_t>(k)] > 0)
        next.row(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
    // Reseed empty clusters (second pass, so every occupied centroid is
    // already a mean): each takes the unclaimed point farthest from its own
    // new centroid; singleton clusters keep their point.
    std::vector<char> claimed(static_cast<std::size_t>(n), 0);
    for (index_t k = 0; k < K; ++k) {
      if (counts[static_cast<std::size_t>(k)] > 0) continue;
      index_t far = -1;
      double far_d = -1.0;
      for (index_t i = 0; i < n; ++i) {
        if (claimed[static_cast<std::size_t>(i)]) continue;
        const auto a = res.assignment[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(a)] <= 1) continue;
        const double d = sqdist(X, i, next, a);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far < 0) far = 0;  // everything is a singleton or claimed
      claimed[static_cast<std::size_t>(far)] = 1;
      next.row(k) = X.row(far);
      counts[static_cast<std::size_t>(k)] = 1;
    }

    double moved = 0.0;
    for (index_t k = 0; k < K; ++k)
      moved = std::max(moved, sqdist(next, k, res.centroids, k));
    res.centroids = next;
    if (moved < tol || moved == 0.0) break;
  }

  // Final assignment against the final centroids.
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    res.assignment[i] = nearest(X, static_cast<index_t>(i), res.centroids,
                                &dist[i]);
  });
  double wcss = 0.0;
  for (index_t i = 0; i < n; ++i) wcss += dist[static_cast<std::size_t>(i)];
  res.inertia_trace.push_back(wcss);
  return res;
}

}  // namespace fc
