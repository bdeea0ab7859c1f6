// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "types.hpp"

namespace fc {

struct Clustering {
  std::vector<index_t> assignment;  // in [0, num_clusters), one per doc
  index_t num_clusters = 0;
  std::vector<std::string> doc_ids;  // aligned with assignment
};

struct GroundTruth {
  std::map<std::string, index_t> classes;  // doc_id -> class in [0, num_classes)
  index_t num_classes = 0;
};

// Cluster of row r = argmax of U(r, :); ties and all-zero rows take the
// lowest index. doc_ids must align with eval_rows.
Clustering assign_argmax(const Eigen::MatrixXd& U,
                         const std::vector<index_t>& eval_rows,
                         const std::vector<std::string>& doc_ids);

// k-means on the selected rows of U (raw, unnormalized). Same engine and
// tie rules as codebook training.
Clustering assign_kmeans(const Eigen::MatrixXd& U,
                         const std::vector<index_t>& eval_rows,
                         const std::vector<std::string>& doc_ids,
                         index_t num_clusters, std::uint64_t seed,
                         int max_iter = 100, double tol = 1e-9);

}  // namespace fc
