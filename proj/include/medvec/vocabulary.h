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

#ifndef MEDVEC_VOCABULARY_H_
#define MEDVEC_VOCABULARY_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace medvec {

struct VocabEntry {
  std::string word;
  std::int64_t count = 0;

  bool operator==(const VocabEntry&) const = default;
};

// Words retained after min-count filtering, sorted by count descending with
// ties in first-occurrence order. Index i is the word's row in every model
// matrix.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Entries must already be in canonical order; duplicates are rejected.
  explicit Vocabulary(std::vector<VocabEntry> entries);

  static Vocabulary build(std::span<const std::string> tokens,
                          std::int64_t min_count);

  // Counts whitespace-separated tokens of a preprocessed corpus.
  static Vocabulary build(std::istream& corpus, std::int64_t min_count);

  // "word<TAB>count" lines in canonical order.
  void write_tsv(std::ostream& out) const;
  void save_tsv(const std::filesystem::path& path) const;
  static Vocabulary read_tsv(std::istream& in);
  static Vocabulary load_tsv(const std::filesystem::path& path);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const VocabEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<VocabEntry>& entries() const { return entries_; }
  std::int64_t total_tokens() const { return total_tokens_; }

  // Row index of `word`, or -1.
  std::int32_t index_of(std::string_view word) const;
  bool contains(std::string_view word) const { return index_of(word) >= 0; }

  bool operator==(const Vocabulary& other) const {
    return entries_ == other.entries_;
  }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, std::int32_t, StringHash, std::equal_to<>>
      index_;
  std::int64_t total_tokens_ = 0;
};

// Huffman code and root-to-leaf path of inner nodes for every word, stored
// flat. Inner nodes are numbered 0..size-2 in creation order; the root is
// the last one.
class HuffmanCoding {
 public:
  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t inner_nodes() const { return inner_nodes_; }

  std::span<const std::uint8_t> code(std::size_t word) const {
    return {bits_.data() + offsets_[word], offsets_[word + 1] - offsets_[word]};
  }
  std::span<const std::int32_t> path(std::size_t word) const {
    return {nodes_.data() + offsets_[word], offsets_[word + 1] - offsets_[word]};
  }

 private:
  friend HuffmanCoding build_huffman(std::span<const std::int64_t> counts);

  std::vector<std::size_t> offsets_;
  std::vector<std::uint8_t> bits_;
  std::vector<std::int32_t> nodes_;
  std::size_t inner_nodes_ = 0;
};

// Among equal weights the node created first is merged first; the first of
// the two merged nodes gets bit 0. A one-word vocabulary gets the code "0"
// through a single inner node.
HuffmanCoding build_huffman(std::span<const std::int64_t> counts);
HuffmanCoding build_huffman(const Vocabulary& vocab);

// Discretized P(w) ∝ count(w)^power used to draw negative samples.
class UnigramTable {
 public:
  static constexpr double kDefaultPower = 0.75;
  static constexpr std::size_t kDefaultSize = 10'000'000;

  UnigramTable() = default;
  UnigramTable(std::span<const std::int64_t> counts, double power,
               std::size_t table_size);
  UnigramTable(const Vocabulary& vocab, double power = kDefaultPower,
               std::size_t table_size = kDefaultSize);

  template <typename Rng>
  std::int32_t sample(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, table_.size() - 1);
    return table_[pick(rng)];
  }

  std::int32_t at(std::size_t slot) const { return table_[slot]; }
  std::size_t table_size() const { return table_.size(); }
  std::size_t vocab_size() const { return slots_.size(); }

  // Share of table slots held by `word`.
  double probability(std::size_t word) const {
    return static_cast<double>(slots_[word]) / static_cast<double>(table_.size());
  }

 private:
  std::vector<std::int32_t> table_;
  std::vector<std::size_t> slots_;
};

// Probability of keeping one occurrence of a word with `count` occurrences
// in a corpus of `total_tokens`: min(1, sqrt(sample / f)), f = count/total.
// sample == 0 disables subsampling.
double keep_probability(std::int64_t count, std::int64_t total_tokens,
                        double sample);

}  // namespace medvec

#endif  // MEDVEC_VOCABULARY_H_
