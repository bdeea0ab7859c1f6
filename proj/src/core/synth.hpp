// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cluster.hpp"
#include "text.hpp"
#include "types.hpp"

namespace fc {

// Desk-scale synthetic corpus: per class, a token pool sampled from a
// shared universe and one WOC document listing the whole pool; per image,
// a visual histogram whose draws land in the wrong class's visual block
// with probability visual_noise; a labeled_fraction of images carry a
// caption of caption_len distinct pool tokens.
struct SynthSpec {
  index_t num_classes = 3;
  index_t images_per_class = 100;
  index_t visual_words_per_class = 20;  // p = num_classes * this
  index_t vocab_per_class = 40;         // class pool size
  index_t text_universe = 80;           // shared token universe (pool overlap)
  index_t caption_len = 5;
  index_t draws_per_image = 40;
  index_t woc_repeat = 2;  // count of each pool token in its WOC doc
  double labeled_fraction = 0.3;
  double visual_noise = 0.55;
  std::vector<std::uint64_t> seeds = default_seeds();

  static std::vector<std::uint64_t> default_seeds() {
    std::vector<std::uint64_t> s;
    for (std::uint64_t i = 1; i <= 20; ++i) s.push_back(i);
    return s;
  }

  index_t n() const { return num_classes * images_per_class; }
  index_t p() const { return num_classes * visual_words_per_class; }

  void validate() const;  // invalid_argument on out-of-range fields
};

struct SynthData {
  CountMatrix histograms;              // n x p, row_ids = image ids
  std::vector<TextDocument> captions;  // ids are a subset of image ids
  std::vector<TextDocument> woc;       // one per class, ids "woc_<label>"
  GroundTruth truth;                   // image id -> class index
  std::vector<std::string> class_names;
};

SynthData synth_generate(const SynthSpec& spec, std::uint64_t seed);

}  // namespace fc
