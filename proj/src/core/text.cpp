// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include "text.hpp"

#include <string>

namespace fc {

namespace {

// Unicode whitespace per UAX #44 White_Space=yes.
bool is_space(char32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x20:
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Decode the codepoint at position i, writing its byte length to len.
// Malformed sequences fall back to the single raw byte, so no input can
// make the scanner stall or read out of bounds.
char32_t decode_utf8(std::string_view s, std::size_t i, std::size_t& len) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  len = 1;
  if (b0 < 0x80) return b0;
  int extra;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    return b0;
  }
  if (i + static_cast<std::size_t>(extra) >= s.size()) return b0;  // truncated
  for (int j = 1; j <= extra; ++j) {
    const auto bj = static_cast<unsigned char>(s[i + static_cast<std::size_t>(j)]);
    if ((bj & 0xC0) != 0x80) return b0;
    cp = (cp << 6) | (bj & 0x3F);
  }
  len = static_cast<std::size_t>(extra) + 1;
  return cp;
}

bool is_word_byte(unsigned char c) {
  return c >= 0x80 || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

}  // namespace

std::vector<std::string> tokenize(
    std::string_view raw, const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    for (char& ch : cur)
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch + 32);
    std::size_t b = 0, e = cur.size();
    while (b < e && !is_word_byte(static_cast<unsigned char>(cur[b]))) ++b;
    while (e > b && !is_word_byte(static_cast<unsigned char>(cur[e - 1]))) --e;
    std::string tok = cur.substr(b, e - b);
    cur.clear();
    if (tok.empty() || stopwords.count(tok)) return;
    out.push_back(std::move(tok));
  };

  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t len;
    const char32_t cp = decode_utf8(raw, i, len);
    if (is_space(cp))
      flush();
    else
      cur.append(raw.substr(i, len));
    i += len;
  }
  flush();
  return out;
}

Vocabulary build_vocabulary(const std::vector<TextDocument>& woc_docs,
                            const std::vector<TextDocument>& caption_docs) {
  Vocabulary v;
  for (const auto& d : woc_docs)
    for (const auto& t : d.tokens) v.add_if_missing(t);
  for (const auto& d : caption_docs)
    for (const auto& t : d.tokens) v.add_if_missing(t);
  return v;
}

CountMatrix count_features(const std::vector<TextDocument>& docs,
                           const Vocabulary& vocab) {
  CountMatrix m(static_cast<index_t>(docs.size()), vocab.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    m.row_ids.push_back(docs[i].id);
    for (const auto& t : docs[i].tokens) {
      auto col = vocab.find(t);
      if (!col)
        fail(errkind::unknown_feature,
             "count_features: token '" + t + "' in document '" + docs[i].id +
                 "' is not in the vocabulary");
      m.add(static_cast<index_t>(i), *col, 1);
    }
  }
  return m;
}

CountMatrix extend_text_matrix(const CountMatrix& B, index_t n,
                               const std::vector<std::string>& extra_row_ids) {
  if (n < B.rows)
    fail(errkind::dimension, "extend_text_matrix: target row count " +
                                 std::to_string(n) + " is below " +
                                 std::to_string(B.rows));
  if (static_cast<index_t>(extra_row_ids.size()) != n - B.rows)
    fail(errkind::dimension,
         "extend_text_matrix: expected " + std::to_string(n - B.rows) +
             " extra row ids, got " + std::to_string(extra_row_ids.size()));
  CountMatrix out(n, B.cols);
  out.row_ids = B.row_ids;
  out.row_ids.insert(out.row_ids.end(), extra_row_ids.begin(),
                     extra_row_ids.end());
  out.entries = B.entries;
  return out;
}

}  // namespace fc
