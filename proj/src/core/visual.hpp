// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "types.hpp"

namespace fc {

struct DescriptorSet {
  std::string doc_id;
  Eigen::MatrixXd descriptors;  // one descriptor per row; 0 x d is legal
};

struct Codebook {
  Eigen::MatrixXd centroids;  // K x d
  index_t K() const { return centroids.rows(); }
  index_t dim() const { return centroids.cols(); }
};

// k-means over the pooled descriptors (k-means++ seeding, see kmeans.hpp).
Codebook train_codebook(const Eigen::MatrixXd& all_descriptors, index_t K,
                        std::uint64_t seed, int max_iter, double tol);

// Histogram each image over nearest centroids (squared Euclidean, ties to
// the lowest index). Row i sums to the descriptor count of image i.
CountMatrix quantize(const std::vector<DescriptorSet>& images,
                     const Codebook& codebook);

}  // namespace fc
