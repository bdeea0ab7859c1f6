// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <tuple>
#include <vector>

#include "text.hpp"
#include "types.hpp"

namespace fc {

// Mixed document-feature matrix
//
//       M = [ A  B ]      n image rows (first m captioned), p visual cols
//           [ 0  C ]      k WOC rows, q text cols
//
// stored as sorted coordinate triplets. The lower-left k x p block is
// structurally zero and stays zero through IDF weighting.
struct FusedMatrix {
  index_t n = 0, m = 0, k = 0, p = 0, q = 0;
  std::vector<std::string> row_ids;  // n image ids then k WOC ids
  std::vector<std::string> col_ids;  // p visual ids then q text features
  std::vector<std::tuple<index_t, index_t, double>> triplets;  // row-major

  index_t rows() const { return n + k; }
  index_t cols() const { return p + q; }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), cols());
    for (const auto& [r, c, v] : triplets) d(r, c) = v;
    return d;
  }
};

struct IdfWeights {
  std::vector<double> weights;  // one per column, >= 0
};

enum class IdfMode {
  all_rows,           // N_docs = n + k (default; consistent with M's shape)
  captioned_plus_woc  // N_docs = m + k (the formula as literally written)
};

// Block assembly. A is n x p; B must already be zero-extended to n x q
// against `vocab`; C is k x q over the same vocab. `m` counts captioned
// documents (rows 0..m-1 of B may be nonzero) and is carried as metadata.
FusedMatrix assemble_fused(const CountMatrix& A, const CountMatrix& B,
                           const CountMatrix& C, index_t m,
                           const Vocabulary& vocab);

// weights[j] = max(0, ln(N_docs / df_j)) with df_j = |{i : M_ij > 0}|;
// df_j = 0 gives weight 0. Operates on raw (pre-weighting) counts.
IdfWeights compute_idf(const FusedMatrix& M, IdfMode mode = IdfMode::all_rows);

// Scale column j by w[j]; entries hitting exactly zero are dropped.
FusedMatrix apply_idf(const FusedMatrix& M, const IdfWeights& w);

}  // namespace fc
