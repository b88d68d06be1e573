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

#include "medvec/vocabulary.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <tuple>


#include "medvec/error.h"
#include "medvec/io.h"

namespace medvec {
namespace {

struct Counter {
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<VocabEntry> seen;  // first-occurrence order

  void add(std::string_view word) {
    auto [it, inserted] = slot.try_emplace(std::string(word), seen.size());
    if (inserted) seen.push_back({std::string(word), 0});
    ++seen[it->second].count;
  }

  Vocabulary finish(std::int64_t min_count) {
    if (min_count < 1) throw ConfigError("min_count must be >= 1");
    std::vector<VocabEntry> kept;
    for (VocabEntry& e : seen) {
      if (e.count >= min_count) kept.push_back(std::move(e));
    }
    if (kept.empty()) {
      throw ConfigError("vocabulary is empty after applying min_count=" +
                        std::to_string(min_count));
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const VocabEntry& a, const VocabEntry& b) {
                       return a.count > b.count;
                     });
    return Vocabulary(std::move(kept));
  }
};

}  // namespace

Vocabulary::Vocabulary(std::vector<VocabEntry> entries)
    : entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const VocabEntry& e = entries_[i];
    if (e.word.empty()) throw Error("vocabulary contains an empty word");
    if (i > 0 && e.count > entries_[i - 1].count) {
      throw Error("vocabulary entries are not sorted by count");
    }
    if (!index_.emplace(e.word, static_cast<std::int32_t>(i)).second) {
      throw Error("duplicate vocabulary word '" + e.word + "'");
    }
    total_tokens_ += e.count;
  }
}

Vocabulary Vocabulary::build(std::span<const std::string> tokens,
                             std::int64_t min_count) {
  Counter counter;
  for (const std::string& t : tokens) counter.add(t);
  return counter.finish(min_count);
}

Vocabulary Vocabulary::build(std::istream& corpus, std::int64_t min_count) {
  Counter counter;
  std::string word;
  while (corpus >> word) counter.add(word);
  if (corpus.bad()) throw InputError("failed reading corpus");
  return counter.finish(min_count);
}

std::int32_t Vocabulary::index_of(std::string_view word) const {
  auto it = index_.find(word);
  return it == index_.end() ? -1 : it->second;
}

void Vocabulary::write_tsv(std::ostream& out) const {
  for (const VocabEntry& e : entries_) out << e.word << '\t' << e.count << '\n';
}

void Vocabulary::save_tsv(const std::filesystem::path& path) const {
  AtomicFileWriter writer(path);
  write_tsv(writer.stream());
  writer.commit();
}

Vocabulary Vocabulary::read_tsv(std::istream& in) {
  std::vector<VocabEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    std::int64_t count = 0;
    const char* first = line.data() + (tab == std::string::npos ? 0 : tab + 1);
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, count);
    if (tab == std::string::npos || tab == 0 || ec != std::errc{} ||
        ptr != last || count < 0) {
      throw Error("malformed vocabulary line " + std::to_string(line_no));
    }
    entries.push_back({line.substr(0, tab), count});
  }
  return Vocabulary(std::move(entries));
}

Vocabulary Vocabulary::load_tsv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return read_tsv(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

HuffmanCoding build_huffman(std::span<const std::int64_t> counts) {
  const std::size_t n = counts.size();
  if (n == 0) throw ConfigError("cannot build a Huffman tree without words");

  HuffmanCoding coding;
  coding.offsets_.assign(n + 1, 0);
  // A lone word is certain: empty code, no inner nodes.
  if (n == 1) return coding;

  // Node ids: leaves 0..n-1, inner nodes n..2n-2 in creation order.
  const std::size_t total = 2 * n - 1;
  std::vector<std::size_t> parent(total, 0);
  std::vector<std::uint8_t> bit(total, 0);
  using Item = std::pair<std::int64_t, std::size_t>;  // (weight, id)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t i = 0; i < n; ++i) heap.emplace(counts[i], i);
  for (std::size_t next = n; next < total; ++next) {
    const Item first = heap.top();
    heap.pop();
    const Item second = heap.top();
    heap.pop();
    parent[first.second] = next;
    parent[second.second] = next;
    bit[first.second] = 0;
    bit[second.second] = 1;
    heap.emplace(first.first + second.first, next);
  }

  const std::size_t root = total - 1;
  std::vector<std::uint8_t> code;
  std::vector<std::int32_t> path;
  for (std::size_t w = 0; w < n; ++w) {
    code.clear();
    path.clear();
    for (std::size_t node = w; node != root; node = parent[node]) {
      code.push_back(bit[node]);
      path.push_back(static_cast<std::int32_t>(parent[node] - n));
    }
    coding.bits_.insert(coding.bits_.end(), code.rbegin(), code.rend());
    coding.nodes_.insert(coding.nodes_.end(), path.rbegin(), path.rend());
    coding.offsets_[w + 1] = coding.bits_.size();
  }
  coding.inner_nodes_ = n - 1;
  return coding;
}

HuffmanCoding build_huffman(const Vocabulary& vocab) {
  std::vector<std::int64_t> counts;
  counts.reserve(vocab.size());
  for (const VocabEntry& e : vocab.entries()) counts.push_back(e.count);
  return build_huffman(counts);
}

UnigramTable::UnigramTable(std::span<const std::int64_t> counts, double power,
                           std::size_t table_size) {
  const std::size_t n = counts.size();
  if (n == 0) throw ConfigError("unigram table needs a non-empty vocabulary");
  if (!(power > 0)) throw ConfigError("unigram power must be > 0");
  if (table_size < n) {
    throw ConfigError("unigram table size " + std::to_string(table_size) +
                      " is smaller than the vocabulary (" + std::to_string(n) +
                      ")");
  }

  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) {
    weight[i] = std::pow(static_cast<double>(std::max<std::int64_t>(counts[i], 1)),
                         power);
  }
  const double sum = std::accumulate(weight.begin(), weight.end(), 0.0);

  // Largest-remainder apportionment of the slots.
  slots_.assign(n, 0);
  std::vector<std::pair<double, std::size_t>> remainder(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double quota = static_cast<double>(table_size) * weight[i] / sum;
    const double whole = std::floor(quota);
    slots_[i] = static_cast<std::size_t>(whole);
    assigned += slots_[i];
    remainder[i] = {quota - whole, i};
  }
  std::stable_sort(remainder.begin(), remainder.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < table_size; ++r) {
    ++slots_[remainder[r % n].second];
    ++assigned;
  }
  // Every word must stay drawable.
  for (std::size_t i = 0; i < n; ++i) {
    if (slots_[i] == 0) {
      auto donor = std::max_element(slots_.begin(), slots_.end());
      --*donor;
      slots_[i] = 1;
    }
  }

  table_.reserve(table_size);
  for (std::size_t i = 0; i < n; ++i) {
    table_.insert(table_.end(), slots_[i], static_cast<std::int32_t>(i));
  }
}

UnigramTable::UnigramTable(const Vocabulary& vocab, double power,
                           std::size_t table_size) {
  std::vector<std::int64_t> counts;
  counts.reserve(vocab.size());
  for (const VocabEntry& e : vocab.entries()) counts.push_back(e.count);
  *this = UnigramTable(counts, power, table_size);
}

double keep_probability(std::int64_t count, std::int64_t total_tokens,
                        double sample) {
  if (sample <= 0 || count <= 0 || total_tokens <= 0) return 1.0;
  const double f = static_cast<double>(count) / static_cast<double>(total_tokens);
  if (f <= sample) return 1.0;
  return std::min(1.0, std::sqrt(sample / f));
}

}  // namespace medvec
