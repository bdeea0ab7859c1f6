// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>
#include <vector>

#include "core/rng.hpp"
#include "core/visual.hpp"

using Eigen::MatrixXd;
using fc::Codebook;
using fc::DescriptorSet;

namespace {

Codebook grid_codebook(int K, int d, fc::rng& r) {
  Codebook cb;
  cb.centroids = MatrixXd(K, d);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < d; ++j) cb.centroids(k, j) = r.uniform(-3, 3);
  return cb;
}

// Exhaustive nearest-centroid oracle with the same plain accumulation
// order the implementation documents; ties to the lowest index.
fc::index_t nearest_brute(const Eigen::RowVectorXd& x, const MatrixXd& C) {
  fc::index_t best = 0;
  double bestd = std::numeric_limits<double>::infinity();
  for (fc::index_t k = 0; k < C.rows(); ++k) {
    double dist = 0;
    for (fc::index_t j = 0; j < C.cols(); ++j) {
      double diff = x(j) - C(k, j);
      dist += diff * diff;
    }
    if (dist < bestd) {
      bestd = dist;
      best = k;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("descriptors sitting on a centroid land in its bin") {
  Codebook cb;
  cb.centroids = MatrixXd(4, 2);
  cb.centroids << 0, 0, 5, 0, 0, 5, 5, 5;
  DescriptorSet img;
  img.doc_id = "im0";
  img.descriptors = MatrixXd(3, 2);
  img.descriptors << 0, 5, 0, 5, 0, 5;  // all equal centroid 2
  auto h = fc::quantize({img}, cb);
  CHECK(h.rows == 1);
  CHECK(h.cols == 4);
  CHECK(h.at(0, 2) == 3);
  CHECK(h.row_sums()[0] == 3);
}

TEST_CASE("an image with zero descriptors yields an all-zero row") {
  Codebook cb;
  cb.centroids = MatrixXd::Identity(3, 3);
  DescriptorSet img;
  img.doc_id = "empty";
  img.descriptors = MatrixXd(0, 3);
  auto h = fc::quantize({img}, cb);
  CHECK(h.rows == 1);
  CHECK(h.row_sums()[0] == 0);
}

TEST_CASE("50-image fixture equals the exhaustive distance scan bit-exactly") {
  fc::rng r(99);
  Codebook cb = grid_codebook(16, 6, r);
  std::vector<DescriptorSet> images;
  for (int i = 0; i < 50; ++i) {
    DescriptorSet s;
    s.doc_id = "im" + std::to_string(i);
    int cnt = static_cast<int>(r.uniform_int(30));
    s.descriptors = MatrixXd(cnt, 6);
    for (int a = 0; a < cnt; ++a)
      for (int j = 0; j < 6; ++j) s.descriptors(a, j) = r.uniform(-3, 3);
    images.push_back(std::move(s));
  }
  auto h = fc::quantize(images, cb);
  fc::CountMatrix oracle(50, 16);
  for (std::size_t i = 0; i < images.size(); ++i)
    for (fc::index_t a = 0; a < images[i].descriptors.rows(); ++a)
      oracle.add(static_cast<fc::index_t>(i),
                 nearest_brute(images[i].descriptors.row(a), cb.centroids), 1);
  CHECK(h.entries == oracle.entries);
}

TEST_CASE("histogram is invariant to descriptor order within an image") {
  fc::rng r(17);
  Codebook cb = grid_codebook(8, 4, r);
  DescriptorSet img;
  img.doc_id = "x";
  img.descriptors = MatrixXd(20, 4);
  for (int a = 0; a < 20; ++a)
    for (int j = 0; j < 4; ++j) img.descriptors(a, j) = r.uniform(-3, 3);
  DescriptorSet rev = img;
  rev.descriptors = img.descriptors.colwise().reverse().eval();
  auto h1 = fc::quantize({img}, cb);
  auto h2 = fc::quantize({rev}, cb);
  CHECK(h1.entries == h2.entries);
}

TEST_CASE("row sums conserve descriptor counts") {
  fc::rng r(7);
  Codebook cb = grid_codebook(5, 3, r);
  std::vector<DescriptorSet> images;
  std::vector<fc::index_t> counts = {0, 4, 9, 1, 13};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    DescriptorSet s;
    s.doc_id = "im" + std::to_string(i);
    s.descriptors = MatrixXd(counts[i], 3);
    for (fc::index_t a = 0; a < counts[i]; ++a)
      for (int j = 0; j < 3; ++j) s.descriptors(a, j) = r.uniform(-1, 1);
    images.push_back(std::move(s));
  }
  auto h = fc::quantize(images, cb);
  auto sums = h.row_sums();
  for (std::size_t i = 0; i < counts.size(); ++i) CHECK(sums[i] == counts[i]);
}

TEST_CASE("dimension mismatch is rejected") {
  Codebook cb;
  cb.centroids = MatrixXd::Zero(2, 3);
  DescriptorSet img;
  img.doc_id = "bad";
  img.descriptors = MatrixXd::Zero(1, 4);
  try {
    fc::quantize({img}, cb);
    FAIL("expected dimension error");
  } catch (const fc::error& e) {
    CHECK(e.kind() == fc::errkind::dimension);
  }
}

TEST_CASE("train_codebook K=1 closed form is the descriptor mean") {
  fc::rng r(3);
  MatrixXd D(40, 3);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 3; ++j) D(i, j) = r.uniform(0, 2);
  auto cb = fc::train_codebook(D, 1, 11, 50, 1e-12);
  Eigen::RowVectorXd mean = D.colwise().mean();
  for (int j = 0; j < 3; ++j)
    CHECK(cb.centroids(0, j) == doctest::Approx(mean(j)).epsilon(1e-12));
}

TEST_CASE("train_codebook rejects K above the descriptor count") {
  MatrixXd D = MatrixXd::Zero(3, 2);
  try {
    fc::train_codebook(D, 4, 1, 10, 0.0);
    FAIL("expected insufficient_data");
  } catch (const fc::error& e) {
    CHECK(e.kind() == fc::errkind::insufficient_data);
  }
}
