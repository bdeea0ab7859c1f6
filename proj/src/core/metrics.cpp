// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include "metrics.hpp"

#include <cmath>
#include <unordered_map>

#include "parallel.hpp"
#include "rng.hpp"

namespace fc {

namespace {

std::int64_t choose2(std::int64_t n) { return n * (n - 1) / 2; }

// Doc-aligned (cluster, class) label vectors; strict id equality.
void aligned_labels(const GroundTruth& truth, const Clustering& clusters,
                    std::vector<index_t>& cl, std::vector<index_t>& gt) {
  if (clusters.doc_ids.size() != clusters.assignment.size())
    fail(errkind::dimension, "metrics: doc_ids and assignment disagree");
  if (clusters.doc_ids.empty())
    fail(errkind::empty_input, "metrics: no documents to score");
  if (clusters.doc_ids.size() != truth.classes.size())
    fail(errkind::id_mismatch,
         "metrics: clustering covers " + std::to_string(clusters.doc_ids.size()) +
             " docs, ground truth covers " + std::to_string(truth.classes.size()));
  cl.clear();
  gt.clear();
  cl.reserve(clusters.doc_ids.size());
  gt.reserve(clusters.doc_ids.size());
  for (std::size_t i = 0; i < clusters.doc_ids.size(); ++i) {
    auto it = truth.classes.find(clusters.doc_ids[i]);
    if (it == truth.classes.end())
      fail(errkind::id_mismatch, "metrics: document '" + clusters.doc_ids[i] +
                                     "' missing from ground truth");
    cl.push_back(clusters.assignment[i]);
    gt.push_back(it->second);
  }
}

// p = sum over contingency cells of C(n_ij, 2)
std::int64_t pairs_in_both(const std::vector<index_t>& cl,
                           const std::vector<index_t>& gt, index_t num_clusters,
                           index_t num_classes) {
  std::vector<std::int64_t> cell(
      static_cast<std::size_t>(num_clusters * num_classes), 0);
  for (std::size_t i = 0; i < cl.size(); ++i)
    ++cell[static_cast<std::size_t>(cl[i] * num_classes + gt[i])];
  std::int64_t p = 0;
  for (std::int64_t n : cell) p += choose2(n);
  return p;
}

}  // namespace

double purity(const GroundTruth& truth, const Clustering& clusters) {
  std::vector<index_t> cl, gt;
  aligned_labels(truth, clusters, cl, gt);
  const auto k = clusters.num_clusters, g = truth.num_classes;
  std::vector<std::int64_t> cell(static_cast<std::size_t>(k * g), 0);
  for (std::size_t i = 0; i < cl.size(); ++i)
    ++cell[static_cast<std::size_t>(cl[i] * g + gt[i])];
  std::int64_t majority_sum = 0;
  for (index_t c = 0; c < k; ++c) {
    std::int64_t best = 0;
    for (index_t j = 0; j < g; ++j)
      best = std::max(best, cell[static_cast<std::size_t>(c * g + j)]);
    majority_sum += best;
  }
  return static_cast<double>(majority_sum) / static_cast<double>(cl.size());
}

PairCounts pair_counts(const GroundTruth& truth, const Clustering& clusters) {
  std::vector<index_t> cl, gt;
  aligned_labels(truth, clusters, cl, gt);
  const auto N = static_cast<std::int64_t>(cl.size());
  PairCounts pc;
  pc.total_pairs = choose2(N);
  std::vector<std::int64_t> by_cluster(
      static_cast<std::size_t>(clusters.num_clusters), 0);
  std::vector<std::int64_t> by_class(static_cast<std::size_t>(truth.num_classes),
                                     0);
  for (std::size_t i = 0; i < cl.size(); ++i) {
    ++by_cluster[static_cast<std::size_t>(cl[i])];
    ++by_class[static_cast<std::size_t>(gt[i])];
  }
  for (std::int64_t n : by_cluster) pc.same_in_clustering += choose2(n);
  for (std::int64_t n : by_class) pc.same_in_truth += choose2(n);
  pc.same_in_both =
      pairs_in_both(cl, gt, clusters.num_clusters, truth.num_classes);
  return pc;
}

ZrandStats zrand_stats(const GroundTruth& truth, const Clustering& clusters) {
  ZrandStats st;
  st.pairs = pair_counts(truth, clusters);
  const double M = static_cast<double>(st.pairs.total_pairs);
  const double M1 = static_cast<double>(st.pairs.same_in_clustering);
  const double M2 = static_cast<double>(st.pairs.same_in_truth);
  if (st.pairs.total_pairs < 2)
    fail(errkind::degenerate_partition,
         "zrand: need at least 3 documents for a null variance");
  st.mu_p = M1 * M2 / M;
  const double var =
      (M1 * M2 / M) * (1.0 - M1 / M) * (M - M2) / (M - 1.0);
  st.sigma_p = std::sqrt(var);
  if (!(st.sigma_p > 0.0))
    fail(errkind::degenerate_partition,
         "zrand: null variance is zero (M=" + std::to_string(st.pairs.total_pairs) +
             ", M1=" + std::to_string(st.pairs.same_in_clustering) +
             ", M2=" + std::to_string(st.pairs.same_in_truth) + ")");
  st.z = (static_cast<double>(st.pairs.same_in_both) - st.mu_p) / st.sigma_p;
  return st;
}

double zrand(const GroundTruth& truth, const Clustering& clusters) {
  return zrand_stats(truth, clusters).z;
}

McStats zrand_mc_oracle(const GroundTruth& truth, const Clustering& clusters,
                        std::int64_t trials, std::uint64_t seed) {
  if (trials < 1000)
    fail(errkind::invalid_argument,
         "zrand_mc_oracle: need >= 1000 trials, got " + std::to_string(trials));
  std::vector<index_t> cl, gt;
  aligned_labels(truth, clusters, cl, gt);

  std::vector<double> p(static_cast<std::size_t>(trials), 0.0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    // per-trial stream, so the outcome never depends on the thread split
    std::uint64_t s =
        seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(t) + 1));
    rng r(splitmix64(s));
    std::vector<index_t> perm = cl;
    r.shuffle(perm);
    p[t] = static_cast<double>(pairs_in_both(
        perm, gt, clusters.num_clusters, truth.num_classes));
  });

  McStats st;
  double sum = 0.0;
  for (double v : p) sum += v;
  st.mean = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (double v : p) ss += (v - st.mean) * (v - st.mean);
  st.stddev = std::sqrt(ss / static_cast<double>(trials - 1));
  return st;
}

}  // namespace fc
