// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "cluster.hpp"
#include "types.hpp"

namespace fc {

struct PairCounts {
  std::int64_t total_pairs = 0;         // M  = N(N-1)/2
  std::int64_t same_in_clustering = 0;  // M1 = pairs co-clustered in C
  std::int64_t same_in_truth = 0;       // M2 = pairs co-classed in G
  std::int64_t same_in_both = 0;        // p
};

// (1/N) * sum over clusters of the majority-class intersection size.
// Requires the clustering's doc set to equal the truth's doc set exactly
// (id_mismatch otherwise); empty_input when there are no documents.
double purity(const GroundTruth& truth, const Clustering& clusters);

// Pair counts via the contingency-table identity sum C(n_ij, 2); the
// O(N^2) enumeration exists in the tests as the independent oracle.
PairCounts pair_counts(const GroundTruth& truth, const Clustering& clusters);

// z_R = (p - mu_p) / sigma_p under the hypergeometric pair null:
// mu_p = M1*M2/M, sigma_p^2 = (M1*M2/M)(1 - M1/M)(M - M2)/(M - 1).
// degenerate_partition when sigma_p = 0.
double zrand(const GroundTruth& truth, const Clustering& clusters);

struct ZrandStats {
  double z = 0, mu_p = 0, sigma_p = 0;
  PairCounts pairs;
};
ZrandStats zrand_stats(const GroundTruth& truth, const Clustering& clusters);

struct McStats {
  double mean = 0;    // sample mean of p over trials
  double stddev = 0;  // sample std (n-1) of p over trials
};

// Null-model check: shuffle the cluster labels uniformly (cluster sizes
// preserved), recount p per trial. Trials draw per-trial derived seeds, so
// the result is independent of thread count. Requires trials >= 1000.
McStats zrand_mc_oracle(const GroundTruth& truth, const Clustering& clusters,
                        std::int64_t trials, std::uint64_t seed);

}  // namespace fc
