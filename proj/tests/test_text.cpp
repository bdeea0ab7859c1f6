// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "core/text.hpp"

using fc::CountMatrix;
using fc::TextDocument;
using fc::Vocabulary;
using stopset = std::unordered_set<std::string>;
using tokens_t = std::vector<std::string>;

namespace {

std::string join(const tokens_t& ts) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ' ';
    out += ts[i];
  }
  return out;
}

// Hand-enumerated oracle corpus. Each expectation was derived on paper
// from the tokenization rules, not from running the implementation.
struct Fix {
  const char* raw;
  stopset stop;
  tokens_t want;
};

const std::vector<Fix>& fixtures() {
  static const std::vector<Fix> f = {
      {"The cat sat", {"the"}, {"cat", "sat"}},
      {"", {}, {}},
      {"A cat, a CAT.", {"a"}, {"cat", "cat"}},
      {"  leading and trailing   ", {}, {"leading", "and", "trailing"}},
      {"Hello, World!", {}, {"hello", "world"}},
      {"don't stop-word me", {}, {"don't", "stop-word", "me"}},
      {"...ellipsis... dots...", {}, {"ellipsis", "dots"}},
      {"123 4x5 x86_64", {}, {"123", "4x5", "x86_64"}},
      {"(parens) [brackets] {braces}", {}, {"parens", "brackets", "braces"}},
      {"!!! ??", {}, {}},
      {"MiXeD CaSe", {}, {"mixed", "case"}},
      {"tab\tsep\nnewline\rcr", {}, {"tab", "sep", "newline", "cr"}},
      {"the THE The", {"the"}, {}},
      {"is it a the dog", {"the", "a", "is"}, {"it", "dog"}},
      {"caf\xC3\xA9 na\xC3\xAFve", {}, {"caf\xC3\xA9", "na\xC3\xAFve"}},
      // U+2014 em dash and accented letters are word characters
      {"h\xC3\xA9llo\xE2\x80\x94w\xC3\xB6rld", {},
       {"h\xC3\xA9llo\xE2\x80\x94w\xC3\xB6rld"}},
      // U+00A0 no-break space, U+3000 ideographic space, U+2003 em space
      {"word\xC2\xA0nbsp", {}, {"word", "nbsp"}},
      {"a\xE3\x80\x80z x\xE2\x80\x83y", {}, {"a", "z", "x", "y"}},
      {"'quoted' \"dq\"", {}, {"quoted", "dq"}},
      {"a-b-c a-b-c-", {}, {"a-b-c", "a-b-c"}},
      {"\xCE\xA9\xE2\x89\x88\xC3\xA7 \xE2\x88\x9A\xE2\x88\xAB", {},
       {"\xCE\xA9\xE2\x89\x88\xC3\xA7", "\xE2\x88\x9A\xE2\x88\xAB"}},
  };
  return f;
}

}  // namespace

TEST_CASE("tokenize matches the hand-enumerated oracle corpus") {
  for (const auto& f : fixtures()) {
    CAPTURE(f.raw);
    CHECK(fc::tokenize(f.raw, f.stop) == f.want);
  }
}

TEST_CASE("tokenize is idempotent on its own output") {
  for (const auto& f : fixtures()) {
    CAPTURE(f.raw);
    auto once = fc::tokenize(f.raw, f.stop);
    CHECK(fc::tokenize(join(once), f.stop) == once);
  }
}

TEST_CASE("build_vocabulary appends missing caption features after WOC") {
  std::vector<TextDocument> woc = {{"w", {"cat", "fur"}}};
  std::vector<TextDocument> caps = {{"c", {"fur", "tail"}}};
  auto v = fc::build_vocabulary(woc, caps);
  CHECK(v.features() == tokens_t{"cat", "fur", "tail"});
  CHECK(v.find("tail").value() == 2);
  CHECK(!v.find("dog").has_value());
}

TEST_CASE("build_vocabulary on empty corpus") {
  auto v = fc::build_vocabulary({}, {});
  CHECK(v.size() == 0);
}

TEST_CASE("build_vocabulary equals set union and covers all tokens") {
  std::vector<TextDocument> woc = {
      {"w0", {"alpha", "beta", "gamma", "alpha"}},
      {"w1", {"delta", "beta"}},
      {"w2", {"epsilon"}},
  };
  std::vector<TextDocument> caps = {
      {"c0", {"beta", "zeta"}},
      {"c1", {"eta", "alpha", "eta"}},
  };
  auto v = fc::build_vocabulary(woc, caps);

  std::unordered_set<std::string> expect;
  for (const auto& d : woc)
    for (const auto& t : d.tokens) expect.insert(t);
  for (const auto& d : caps)
    for (const auto& t : d.tokens) expect.insert(t);

  CHECK(static_cast<std::size_t>(v.size()) == expect.size());
  for (const auto& t : expect) CHECK(v.find(t).has_value());
  // WOC tokens come first, in first-seen order
  CHECK(v.features()[0] == "alpha");
  CHECK(v.features()[1] == "beta");
  CHECK(v.features()[2] == "gamma");
  CHECK(v.features()[3] == "delta");
  CHECK(v.features()[4] == "epsilon");
}

TEST_CASE("count_features direct multiplicity") {
  Vocabulary v;
  v.add_if_missing("cat");
  v.add_if_missing("dog");
  std::vector<TextDocument> docs = {{"d0", {"cat", "cat", "dog"}}};
  auto m = fc::count_features(docs, v);
  CHECK(m.rows == 1);
  CHECK(m.cols == 2);
  CHECK(m.at(0, 0) == 2);
  CHECK(m.at(0, 1) == 1);
  CHECK(m.row_ids == tokens_t{"d0"});
}

TEST_CASE("count_features empty document gives an all-zero row") {
  Vocabulary v;
  v.add_if_missing("x");
  std::vector<TextDocument> docs = {{"d0", {}}};
  auto m = fc::count_features(docs, v);
  CHECK(m.rows == 1);
  CHECK(m.entries.empty());
  CHECK(m.row_sums()[0] == 0);
}

TEST_CASE("count_features equals a brute-force nested-loop counter") {
  std::vector<TextDocument> docs = {
      {"d0", {"a", "b", "a"}}, {"d1", {}},           {"d2", {"c", "c", "c"}},
      {"d3", {"b"}},           {"d4", {"a", "c"}},   {"d5", {"d", "a", "d"}},
      {"d6", {"e"}},           {"d7", {"b", "b"}},   {"d8", {"e", "d", "c"}},
  };
  Vocabulary v;
  for (const auto& d : docs)
    for (const auto& t : d.tokens) v.add_if_missing(t);

  auto m = fc::count_features(docs, v);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (fc::index_t j = 0; j < v.size(); ++j) {
      std::int64_t brute = 0;
      for (const auto& t : docs[i].tokens)
        if (t == v.features()[static_cast<std::size_t>(j)]) ++brute;
      CHECK(m.at(static_cast<fc::index_t>(i), j) == brute);
    }
  }
  // row sums equal post-stopword token counts
  auto sums = m.row_sums();
  for (std::size_t i = 0; i < docs.size(); ++i)
    CHECK(sums[i] == static_cast<std::int64_t>(docs[i].tokens.size()));
}

TEST_CASE("count_features rejects tokens missing from the vocabulary") {
  Vocabulary v;
  v.add_if_missing("known");
  std::vector<TextDocument> docs = {{"doc9", {"known", "unknown"}}};
  try {
    fc::count_features(docs, v);
    FAIL("expected unknown_feature");
  } catch (const fc::error& e) {
    CHECK(e.kind() == fc::errkind::unknown_feature);
    CHECK(std::string(e.what()).find("unknown") != std::string::npos);
    CHECK(std::string(e.what()).find("doc9") != std::string::npos);
  }
}

TEST_CASE("extend_text_matrix zero-pads and keeps existing entries") {
  CountMatrix b(2, 3);
  b.row_ids = {"r0", "r1"};
  b.add(0, 1, 4);
  b.add(1, 2, 7);
  auto e = fc::extend_text_matrix(b, 4, {"r2", "r3"});
  CHECK(e.rows == 4);
  CHECK(e.cols == 3);
  CHECK(e.row_ids == tokens_t{"r0", "r1", "r2", "r3"});
  CHECK(e.entries == b.entries);  // sparse-entry set unchanged
  CHECK(e.at(2, 0) == 0);
  CHECK(e.at(3, 2) == 0);
}

TEST_CASE("extend_text_matrix identity when m equals n") {
  CountMatrix b(3, 5);
  b.row_ids = {"a", "b", "c"};
  b.add(2, 4, 1);
  auto e = fc::extend_text_matrix(b, 3, {});
  CHECK(e.rows == 3);
  CHECK(e.entries == b.entries);
  CHECK(e.row_ids == b.row_ids);
}

TEST_CASE("extend_text_matrix to the full-corpus shape") {
  CountMatrix b(450, 12);
  for (int i = 0; i < 450; ++i) b.row_ids.push_back("t" + std::to_string(i));
  b.add(0, 0, 1);
  b.add(449, 11, 3);
  std::vector<std::string> extra;
  for (int i = 450; i < 4500; ++i) extra.push_back("t" + std::to_string(i));
  auto e = fc::extend_text_matrix(b, 4500, extra);
  CHECK(e.rows == 4500);
  CHECK(e.cols == 12);
  CHECK(e.entries.size() == 2);
}

TEST_CASE("extend_text_matrix rejects shrinking") {
  CountMatrix b(4, 2);
  b.row_ids = {"a", "b", "c", "d"};
  CHECK_THROWS_AS(fc::extend_text_matrix(b, 3, {}), fc::error);
}
