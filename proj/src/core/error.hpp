// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fc {

// Failure taxonomy. Kinds map onto the process exit codes / C API status
// values in buckets: config-shaped problems -> 2, data-shaped -> 3,
// numerical breakdowns -> 4, everything unexpected -> 1.
enum class errkind {
  config,            // unparseable config, unknown key, missing referenced path
  invalid_argument,  // parameter outside its documented range
  invalid_rank,      // NMF k* outside [1, min(rows, cols))

  unknown_feature,     // token not in vocabulary (append-missing step skipped)
  dimension,           // shape mismatch between operands
  vocabulary_mismatch, // B and C built against different vocabularies
  insufficient_data,   // fewer points than requested clusters
  negative_input,      // matrix required non-negative has a negative/NaN entry
  empty_input,         // operation needs at least one document
  id_mismatch,         // clustering and ground truth cover different doc sets
  duplicate_id,        // repeated document id at ingestion
  bad_data,            // malformed data file content

  degenerate_partition, // z-Rand null variance is zero
  numeric,              // NMF produced NaN/Inf

  internal,
};

class error : public std::runtime_error {
public:
  error(errkind k, std::string msg) : std::runtime_error(std::move(msg)), kind_(k) {}
  errkind kind() const noexcept { return kind_; }

private:
  errkind kind_;
};

inline int status_of(errkind k) {
  switch (k) {
    case errkind::config:
    case errkind::invalid_argument:
    case errkind::invalid_rank:
      return 2;
    case errkind::unknown_feature:
    case errkind::dimension:
    case errkind::vocabulary_mismatch:
    case errkind::insufficient_data:
    case errkind::negative_input:
    case errkind::empty_input:
    case errkind::id_mismatch:
    case errkind::duplicate_id:
    case errkind::bad_data:
      return 3;
    case errkind::degenerate_partition:
    case errkind::numeric:
      return 4;
    case errkind::internal:
      return 1;
  }
  return 1;
}

[[noreturn]] inline void fail(errkind k, const std::string& msg) {
  throw error(k, msg);
}

}  // namespace fc
