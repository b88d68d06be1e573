// Copyright 2026 The medvec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "medvec/text.h"

#include <locale.h>
#include <wctype.h>

#include <istream>
#include <ostream>
#include <unordered_set>

#include "medvec/error.h"
#include "medvec/io.h"

namespace medvec {
namespace {

// Process-wide UTF-8 ctype locale for classifying non-ASCII code points.
// Null when the C library has no UTF-8 locale; non-ASCII letters are then
// kept unchanged.
locale_t utf8_ctype() {
  static const locale_t loc = [] {
    locale_t l = newlocale(LC_CTYPE_MASK, "C.UTF-8", locale_t{});
    if (l == locale_t{}) l = newlocale(LC_CTYPE_MASK, "C.utf8", locale_t{});
    if (l == locale_t{}) l = newlocale(LC_CTYPE_MASK, "en_US.UTF-8", locale_t{});
    return l;
  }();
  return loc;
}

// Decodes one code point starting at s[i]. Returns the sequence length, or
// 0 for an ill-formed sequence (overlong, surrogate, out of range, short).
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  std::size_t len;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return len;
}

void append_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_joiner(char c) { return c == '-' || c == '_'; }

void flush_token(std::string& token, TokenStream& out) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end && is_joiner(token[begin])) ++begin;
  while (end > begin && is_joiner(token[end - 1])) --end;
  if (begin < end) out.emplace_back(token, begin, end - begin);
  token.clear();
}

std::string join(std::span<const std::string> tokens, char sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += tokens[i];
  }
  return out;
}

}  // namespace

void normalize_text_into(std::string_view raw, std::size_t base_offset,
                         TokenStream& out) {
  std::string token;
  std::size_t i = 0;
  while (i < raw.size()) {
    const char c = raw[i];
    if (static_cast<unsigned char>(c) < 0x80) {
      if (c >= 'A' && c <= 'Z') {
        token.push_back(static_cast<char>(c - 'A' + 'a'));
      } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                 is_joiner(c)) {
        token.push_back(c);
      } else {
        flush_token(token, out);
      }
      ++i;
      continue;
    }
    char32_t cp = 0;
    const std::size_t len = decode_utf8(raw, i, cp);
    if (len == 0) {
      throw DecodeError("invalid UTF-8 sequence", base_offset + i);
    }
    const locale_t loc = utf8_ctype();
    if (loc == locale_t{}) {
      token.append(raw.substr(i, len));
    } else if (iswalpha_l(static_cast<wint_t>(cp), loc)) {
      append_utf8(static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), loc)),
                  token);
    } else {
      flush_token(token, out);
    }
    i += len;
  }
  flush_token(token, out);
}

TokenStream normalize_text(std::string_view raw, std::size_t base_offset) {
  TokenStream out;
  normalize_text_into(raw, base_offset, out);
  return out;
}

MultiwordDictionary::MultiwordDictionary() : nodes_(1) {}

bool MultiwordDictionary::add(std::string_view term) {
  // Underscores are split apart so no stored phrase can match a token that
  // an earlier merge produced.
  TokenStream tokens;
  for (std::string& t : normalize_text(term)) {
    std::size_t start = 0;
    while (start <= t.size()) {
      const std::size_t pos = t.find('_', start);
      const std::size_t stop = pos == std::string::npos ? t.size() : pos;
      std::string piece = t.substr(start, stop - start);
      flush_token(piece, tokens);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  if (tokens.size() < 2) return false;
  if (!phrases_.insert(join(tokens, ' ')).second) return false;

  std::uint32_t node = 0;
  for (const std::string& t : tokens) {
    auto it = nodes_[node].children.find(t);
    if (it == nodes_[node].children.end()) {
      const auto next = static_cast<std::uint32_t>(nodes_.size());
      nodes_[node].children.emplace(t, next);
      nodes_.emplace_back();
      node = next;
    } else {
      node = it->second;
    }
  }
  nodes_[node].terminal = true;
  max_phrase_len_ = std::max(max_phrase_len_, tokens.size());
  return true;
}

bool MultiwordDictionary::contains(std::string_view phrase) const {
  return phrases_.count(std::string(phrase)) > 0;
}

std::size_t MultiwordDictionary::longest_match(
    std::span<const std::string> tokens) const {
  std::size_t best = 0;
  std::uint32_t node = 0;
  const std::size_t limit = std::min(tokens.size(), max_phrase_len_);
  for (std::size_t i = 0; i < limit; ++i) {
    auto it = nodes_[node].children.find(tokens[i]);
    if (it == nodes_[node].children.end()) break;
    node = it->second;
    if (nodes_[node].terminal) best = i + 1;
  }
  return best;
}

MultiwordDictionary MultiwordDictionary::from_stream(std::istream& in) {
  MultiwordDictionary dict;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    try {
      dict.add(line);
    } catch (const DecodeError& e) {
      throw DecodeError("invalid UTF-8 in dictionary",
                        offset + e.byte_offset());
    }
    offset += line.size() + 1;
  }
  if (in.bad()) throw InputError("failed reading dictionary");
  return dict;
}

MultiwordDictionary MultiwordDictionary::load(
    const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return from_stream(in);
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": invalid UTF-8", e.byte_offset());
  }
}

TokenStream merge_multiwords(std::span<const std::string> tokens,
                             const MultiwordDictionary& dict) {
  TokenStream out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::size_t n = dict.empty() ? 0 : dict.longest_match(tokens.subspan(i));
    if (n >= 2) {
      out.push_back(join(tokens.subspan(i, n), '_'));
      i += n;
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  return out;
}

CorpusStats preprocess_corpus(std::istream& in, const MultiwordDictionary& dict,
                              std::ostream& out) {
  CorpusStats stats;
  std::unordered_set<std::string> distinct;
  std::string line;
  std::size_t offset = 0;
  TokenStream tokens;
  while (std::getline(in, line)) {
    tokens.clear();
    normalize_text_into(line, offset, tokens);
    offset += line.size() + 1;
    const TokenStream merged = merge_multiwords(tokens, dict);
    for (std::size_t i = 0; i < merged.size(); ++i) {
      if (i > 0) out.put(' ');
      out << merged[i];
      distinct.insert(merged[i]);
    }
    out.put('\n');
    stats.word_count += merged.size();
  }
  if (in.bad()) throw InputError("failed reading corpus");
  if (!out) throw InputError("failed writing corpus");
  stats.vocabulary_size = distinct.size();
  return stats;
}

CorpusStats preprocess_corpus(const std::filesystem::path& input,
                              const MultiwordDictionary& dict,
                              const std::filesystem::path& output) {
  std::ifstream in = open_input(input);
  AtomicFileWriter writer(output, /*binary=*/true);
  CorpusStats stats;
  try {
    stats = preprocess_corpus(in, dict, writer.stream());
  } catch (const DecodeError& e) {
    throw DecodeError(input.string() + ": invalid UTF-8", e.byte_offset());
  } catch (const InputError& e) {
    throw InputError(input.string() + " -> " + output.string() + ": " +
                     e.what());
  }
  writer.commit();
  return stats;
}

std::string normalize_label(std::string_view label,
                            const MultiwordDictionary& dict) {
  const TokenStream merged = merge_multiwords(normalize_text(label), dict);
  return join(merged, '_');
}

}  // namespace medvec
