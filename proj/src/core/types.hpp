// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace fc {

using index_t = std::int64_t;

// Sparse non-negative integer counts. Zeros are implicit; every stored
// entry is >= 1. Entries iterate in row-major order (std::map key order),
// which keeps downstream serialization deterministic.
struct CountMatrix {
  index_t rows = 0;
  index_t cols = 0;
  std::vector<std::string> row_ids;
  std::map<std::pair<index_t, index_t>, std::int64_t> entries;

  CountMatrix() = default;
  CountMatrix(index_t r, index_t c) : rows(r), cols(c) {}

  void add(index_t r, index_t c, std::int64_t v) {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      fail(errkind::dimension, "CountMatrix::add: index out of range");
    if (v < 0) fail(errkind::negative_input, "CountMatrix::add: negative count");
    if (v == 0) return;
    entries[{r, c}] += v;
  }

  std::int64_t at(index_t r, index_t c) const {
    auto it = entries.find({r, c});
    return it == entries.end() ? 0 : it->second;
  }

  std::vector<std::int64_t> row_sums() const {
    std::vector<std::int64_t> s(static_cast<std::size_t>(rows), 0);
    for (const auto& [rc, v] : entries) s[static_cast<std::size_t>(rc.first)] += v;
    return s;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
    for (const auto& [rc, v] : entries)
      d(rc.first, rc.second) = static_cast<double>(v);
    return d;
  }
};

}  // namespace fc
