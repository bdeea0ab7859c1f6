// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include "cluster.hpp"

#include "kmeans.hpp"

namespace fc {

namespace {

void check_rows(const Eigen::MatrixXd& U, const std::vector<index_t>& rows,
                const std::vector<std::string>& ids) {
  if (rows.empty()) fail(errkind::empty_input, "assign: no rows selected");
  if (rows.size() != ids.size())
    fail(errkind::dimension, "assign: " + std::to_string(rows.size()) +
                                 " rows but " + std::to_string(ids.size()) +
                                 " doc ids");
  for (index_t r : rows)
    if (r < 0 || r >= U.rows())
      fail(errkind::dimension,
           "assign: row " + std::to_string(r) + " outside U");
}

}  // namespace

Clustering assign_argmax(const Eigen::MatrixXd& U,
                         const std::vector<index_t>& eval_rows,
                         const std::vector<std::string>& doc_ids) {
  check_rows(U, eval_rows, doc_ids);
  Clustering c;
  c.doc_ids = doc_ids;
  c.num_clusters = U.cols();
  c.assignment.reserve(eval_rows.size());
  for (index_t r : eval_rows) {
    index_t best = 0;
    for (index_t j = 1; j < U.cols(); ++j)
      if (U(r, j) > U(r, best)) best = j;
    c.assignment.push_back(best);
  }
  return c;
}

Clustering assign_kmeans(const Eigen::MatrixXd& U,
                         const std::vector<index_t>& eval_rows,
                         const std::vector<std::string>& doc_ids,
                         index_t num_clusters, std::uint64_t seed,
                         int max_iter, double tol) {
  check_rows(U, eval_rows, doc_ids);
  Eigen::MatrixXd X(static_cast<index_t>(eval_rows.size()), U.cols());
  for (std::size_t i = 0; i < eval_rows.size(); ++i)
    X.row(static_cast<index_t>(i)) = U.row(eval_rows[i]);
  auto km = kmeans(X, num_clusters, seed, max_iter, tol);
  Clustering c;
  c.doc_ids = doc_ids;
  c.num_clusters = num_clusters;
  c.assignment = std::move(km.assignment);
  return c;
}

}  // namespace fc
