// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include "fusion.hpp"

#include <algorithm>
#include <cmath>

namespace fc {

FusedMatrix assemble_fused(const CountMatrix& A, const CountMatrix& B,
                           const CountMatrix& C, index_t m,
                           const Vocabulary& vocab) {
  if (B.rows != A.rows)
    fail(errkind::dimension, "assemble_fused: B has " + std::to_string(B.rows) +
                                 " rows, A has " + std::to_string(A.rows));
  if (B.cols != vocab.size() || C.cols != vocab.size())
    fail(errkind::vocabulary_mismatch,
         "assemble_fused: text blocks disagree with the vocabulary (B: " +
             std::to_string(B.cols) + ", C: " + std::to_string(C.cols) +
             ", vocab: " + std::to_string(vocab.size()) + ")");
  if (m < 0 || m > A.rows)
    fail(errkind::invalid_argument,
         "assemble_fused: captioned count " + std::to_string(m) +
             " outside [0, " + std::to_string(A.rows) + "]");
  if (A.rows == 0) fail(errkind::empty_input, "assemble_fused: no documents");

  FusedMatrix M;
  M.n = A.rows;
  M.m = m;
  M.k = C.rows;
  M.p = A.cols;
  M.q = vocab.size();
  M.row_ids = A.row_ids;
  M.row_ids.insert(M.row_ids.end(), C.row_ids.begin(), C.row_ids.end());
  for (index_t j = 0; j < M.p; ++j) M.col_ids.push_back("v" + std::to_string(j));
  M.col_ids.insert(M.col_ids.end(), vocab.features().begin(),
                   vocab.features().end());

  // CountMatrix iterates row-major; a final sort merges the three blocks.
  for (const auto& [rc, v] : A.entries)
    M.triplets.push_back({rc.first, rc.second, static_cast<double>(v)});
  for (const auto& [rc, v] : B.entries)
    M.triplets.push_back({rc.first, M.p + rc.second, static_cast<double>(v)});
  for (const auto& [rc, v] : C.entries)
    M.triplets.push_back({M.n + rc.first, M.p + rc.second,
                          static_cast<double>(v)});
  std::sort(M.triplets.begin(), M.triplets.end());
  return M;
}

IdfWeights compute_idf(const FusedMatrix& M, IdfMode mode) {
  const double N = mode == IdfMode::all_rows
                       ? static_cast<double>(M.rows())
                       : static_cast<double>(M.m + M.k);
  if (N <= 0) fail(errkind::empty_input, "compute_idf: no documents");
  std::vector<index_t> df(static_cast<std::size_t>(M.cols()), 0);
  for (const auto& [r, c, v] : M.triplets)
    if (v > 0) ++df[static_cast<std::size_t>(c)];
  IdfWeights w;
  w.weights.resize(static_cast<std::size_t>(M.cols()), 0.0);
  for (std::size_t j = 0; j < w.weights.size(); ++j) {
    if (df[j] == 0) continue;  // dead column keeps weight 0
    w.weights[j] = std::max(0.0, std::log(N / static_cast<double>(df[j])));
  }
  return w;
}

FusedMatrix apply_idf(const FusedMatrix& M, const IdfWeights& w) {
  if (static_cast<index_t>(w.weights.size()) != M.cols())
    fail(errkind::dimension,
         "apply_idf: " + std::to_string(w.weights.size()) + " weights for " +
             std::to_string(M.cols()) + " columns");
  FusedMatrix out = M;
  out.triplets.clear();
  for (const auto& [r, c, v] : M.triplets) {
    const double scaled = v * w.weights[static_cast<std::size_t>(c)];
    if (scaled != 0.0) out.triplets.push_back({r, c, scaled});
  }
  return out;
}

}  // namespace fc
