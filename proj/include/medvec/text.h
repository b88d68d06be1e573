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

// Corpus normalization: punctuation removal, case folding and merging of
// dictionary multiword terms into single underscore-joined tokens.

#ifndef MEDVEC_TEXT_H_
#define MEDVEC_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace medvec {

using TokenStream = std::vector<std::string>;

// Splits raw UTF-8 text into lowercase tokens. Letters (any script), ASCII
// digits, '-' and '_' are token characters; everything else is a boundary.
// Leading and trailing '-'/'_' are stripped from each token and empty tokens
// are dropped. `base_offset` is added to the byte offset reported by
// DecodeError so callers streaming a file can point at the right byte.
TokenStream normalize_text(std::string_view raw, std::size_t base_offset = 0);

// Appending variant used by the streaming paths.
void normalize_text_into(std::string_view raw, std::size_t base_offset,
                         TokenStream& out);

// Set of normalized multi-token phrases, stored as a token trie so the
// longest phrase starting at a position is found in one walk.
class MultiwordDictionary {
 public:
  MultiwordDictionary();

  static MultiwordDictionary load(const std::filesystem::path& path);
  static MultiwordDictionary from_stream(std::istream& in);

  // Normalizes `term` and stores it if it has at least two tokens. Returns
  // true when a new phrase was added.
  bool add(std::string_view term);

  // `phrase` in normalized form, tokens separated by single spaces.
  bool contains(std::string_view phrase) const;

  // Number of tokens of the longest phrase matching at tokens[0], or 0.
  std::size_t longest_match(std::span<const std::string> tokens) const;

  std::size_t size() const { return phrases_.size(); }
  bool empty() const { return phrases_.empty(); }
  std::size_t max_phrase_len() const { return max_phrase_len_; }
  const std::set<std::string>& phrases() const { return phrases_; }

 private:
  struct TrieNode {
    std::unordered_map<std::string, std::uint32_t> children;
    bool terminal = false;
  };

  std::vector<TrieNode> nodes_;
  std::set<std::string> phrases_;
  std::size_t max_phrase_len_ = 0;
};

// Greedy longest-match, left to right. A matched phrase becomes one token
// with its words joined by '_'.
TokenStream merge_multiwords(std::span<const std::string> tokens,
                             const MultiwordDictionary& dict);

struct CorpusStats {
  std::uint64_t word_count = 0;
  std::uint64_t vocabulary_size = 0;

  bool operator==(const CorpusStats&) const = default;
};

// Line-by-line normalize + merge. Each input line yields one output line of
// space-separated tokens; phrases never span lines.
CorpusStats preprocess_corpus(std::istream& in, const MultiwordDictionary& dict,
                              std::ostream& out);

// File variant. The output is written to a temporary sibling and renamed on
// success so a failed run leaves nothing behind.
CorpusStats preprocess_corpus(const std::filesystem::path& input,
                              const MultiwordDictionary& dict,
                              const std::filesystem::path& output);

// Normalizes and merges a single label (gold-standard field, query term)
// into one token: phrase matches are merged and any remaining tokens are
// joined with '_'. Returns an empty string when nothing survives.
std::string normalize_label(std::string_view label,
                            const MultiwordDictionary& dict);

}  // namespace medvec

#endif  // MEDVEC_TEXT_H_
