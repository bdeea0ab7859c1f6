// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include "visual.hpp"

#include <vector>

#include "kmeans.hpp"
#include "parallel.hpp"

namespace fc {

Codebook train_codebook(const Eigen::MatrixXd& all_descriptors, index_t K,
                        std::uint64_t seed, int max_iter, double tol) {
  if (all_descriptors.rows() == 0)
    fail(errkind::empty_input, "train_codebook: no descriptors");
  auto res = kmeans(all_descriptors, K, seed, max_iter, tol);
  return Codebook{std::move(res.centroids)};
}

CountMatrix quantize(const std::vector<DescriptorSet>& images,
                     const Codebook& codebook) {
  if (codebook.K() == 0) fail(errkind::empty_input, "quantize: empty codebook");
  CountMatrix h(static_cast<index_t>(images.size()), codebook.K());
  for (const auto& im : images) {
    h.row_ids.push_back(im.doc_id);
    if (im.descriptors.rows() > 0 && im.descriptors.cols() != codebook.dim())
      fail(errkind::dimension,
           "quantize: image '" + im.doc_id + "' has dimension " +
               std::to_string(im.descriptors.cols()) + ", codebook has " +
               std::to_string(codebook.dim()));
  }
  // Per-image histograms land in disjoint rows, so images parallelize.
  std::vector<std::vector<index_t>> bins(images.size());
  parallel_for(images.size(), [&](std::size_t i) {
    const auto& D = images[i].descriptors;
    auto& mine = bins[i];
    mine.reserve(static_cast<std::size_t>(D.rows()));
    for (index_t r = 0; r < D.rows(); ++r) {
      index_t best = 0;
      double best_d = sqdist(D, r, codebook.centroids, 0);
      for (index_t c = 1; c < codebook.K(); ++c) {
        const double d = sqdist(D, r, codebook.centroids, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      mine.push_back(best);
    }
  });
  for (std::size_t i = 0; i < images.size(); ++i)
    for (index_t b : bins[i]) h.add(static_cast<index_t>(i), b, 1);
  return h;
}

}  // namespace fc
