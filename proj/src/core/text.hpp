// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "types.hpp"

namespace fc {

struct TextDocument {
  std::string id;
  std::vector<std::string> tokens;  // lowercase, no whitespace; may be empty
};

// Ordered feature set with a stable feature -> column bijection.
class Vocabulary {
public:
  index_t size() const { return static_cast<index_t>(features_.size()); }

  std::optional<index_t> find(const std::string& f) const {
    auto it = index_.find(f);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Returns the column of f, appending it if unseen.
  index_t add_if_missing(const std::string& f) {
    auto it = index_.find(f);
    if (it != index_.end()) return it->second;
    index_t col = size();
    index_.emplace(f, col);
    features_.push_back(f);
    return col;
  }

  const std::vector<std::string>& features() const { return features_; }

private:
  std::vector<std::string> features_;
  std::unordered_map<std::string, index_t> index_;
};

// Split raw UTF-8 text on Unicode whitespace, lowercase ASCII letters,
// strip leading/trailing ASCII non-alphanumerics (multi-byte characters
// count as word characters), then drop stopwords and empty leftovers.
// Stopword entries must already be lowercase.
std::vector<std::string> tokenize(
    std::string_view raw, const std::unordered_set<std::string>& stopwords);

// WOC tokens first (first-seen order), then unseen caption tokens appended
// in first-seen order.
Vocabulary build_vocabulary(const std::vector<TextDocument>& woc_docs,
                            const std::vector<TextDocument>& caption_docs);

// entry (i, j) = multiplicity of feature j in docs[i]. Tokens absent from
// vocab raise unknown_feature.
CountMatrix count_features(const std::vector<TextDocument>& docs,
                           const Vocabulary& vocab);

// Zero-extend an m-row matrix to n rows; extra_row_ids names rows m..n-1.
CountMatrix extend_text_matrix(const CountMatrix& B, index_t n,
                               const std::vector<std::string>& extra_row_ids);

}  // namespace fc
