// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rng.hpp"

namespace fc {

namespace {

std::string image_id(index_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "img%05lld", static_cast<long long>(i));
  return buf;
}

}  // namespace

void SynthSpec::validate() const {
  auto bad = [](const std::string& msg) {
    fail(errkind::invalid_argument, "synth spec: " + msg);
  };
  if (num_classes < 1) bad("num_classes must be >= 1");
  if (images_per_class < 1) bad("images_per_class must be >= 1");
  if (visual_words_per_class < 1) bad("visual_words_per_class must be >= 1");
  if (vocab_per_class < 1) bad("vocab_per_class must be >= 1");
  if (text_universe < vocab_per_class)
    bad("text_universe must hold a full class pool");
  if (caption_len < 0) bad("caption_len must be >= 0");
  if (caption_len > vocab_per_class)
    bad("caption_len exceeds the class pool (sampling is without replacement)");
  if (draws_per_image < 0) bad("draws_per_image must be >= 0");
  if (woc_repeat < 1) bad("woc_repeat must be >= 1");
  if (!(labeled_fraction >= 0.0 && labeled_fraction <= 1.0))
    bad("labeled_fraction must lie in [0, 1]");
  if (!(visual_noise >= 0.0 && visual_noise <= 1.0))
    bad("visual_noise must lie in [0, 1]");
}

SynthData synth_generate(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  rng r(derive_seed(seed, "synth"));
  const index_t n = spec.n(), vwpc = spec.visual_words_per_class;

  SynthData d;
  d.truth.num_classes = spec.num_classes;
  for (index_t c = 0; c < spec.num_classes; ++c)
    d.class_names.push_back("c" + std::to_string(c));

  // visual histograms: each draw stays in its class block, or lands
  // uniformly in another class's block with probability visual_noise
  d.histograms = CountMatrix(n, spec.p());
  for (index_t i = 0; i < n; ++i) {
    const index_t cls = i / spec.images_per_class;
    const std::string id = image_id(i);
    d.histograms.row_ids.push_back(id);
    d.truth.classes[id] = cls;
    for (index_t draw = 0; draw < spec.draws_per_image; ++draw) {
      index_t block = cls;
      if (spec.num_classes > 1 && r.uniform() < spec.visual_noise) {
        auto other = static_cast<index_t>(
            r.uniform_int(static_cast<std::uint64_t>(spec.num_classes - 1)));
        block = other >= cls ? other + 1 : other;
      }
      const auto word = static_cast<index_t>(
          r.uniform_int(static_cast<std::uint64_t>(vwpc)));
      d.histograms.add(i, block * vwpc + word, 1);
    }
  }

  // class token pools drawn from a shared universe (pools overlap whenever
  // text_universe < num_classes * vocab_per_class), one WOC doc per pool
  std::vector<std::vector<std::string>> pools;
  for (index_t c = 0; c < spec.num_classes; ++c) {
    auto idx = r.sample_without_replacement(
        static_cast<std::uint32_t>(spec.text_universe),
        static_cast<std::uint32_t>(spec.vocab_per_class));
    std::vector<std::string> pool;
    pool.reserve(idx.size());
    for (auto t : idx) pool.push_back("w" + std::to_string(t));
    TextDocument woc;
    woc.id = "woc_" + d.class_names[static_cast<std::size_t>(c)];
    for (const auto& t : pool)
      for (index_t rep = 0; rep < spec.woc_repeat; ++rep) woc.tokens.push_back(t);
    d.woc.push_back(std::move(woc));
    pools.push_back(std::move(pool));
  }

  // captions for the first m images of a random permutation
  const auto m = static_cast<index_t>(
      std::llround(spec.labeled_fraction * static_cast<double>(n)));
  auto perm = r.permutation(static_cast<std::uint32_t>(n));
  std::vector<std::pair<index_t, std::vector<std::string>>> caps;
  for (index_t j = 0; j < m; ++j) {
    const auto i = static_cast<index_t>(perm[static_cast<std::size_t>(j)]);
    const index_t cls = i / spec.images_per_class;
    auto tok_idx = r.sample_without_replacement(
        static_cast<std::uint32_t>(spec.vocab_per_class),
        static_cast<std::uint32_t>(spec.caption_len));
    std::vector<std::string> tokens;
    for (auto t : tok_idx)
      tokens.push_back(pools[static_cast<std::size_t>(cls)][t]);
    caps.push_back({i, std::move(tokens)});
  }
  std::sort(caps.begin(), caps.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [i, tokens] : caps)
    d.captions.push_back({image_id(i), std::move(tokens)});
  return d;
}

}  // namespace fc
