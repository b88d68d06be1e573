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

// Nearest-neighbour ("distance") and vector-offset ("analogy") queries over
// the input vectors of a model, by exhaustive cosine scan.

#ifndef MEDVEC_VECTOR_STORE_H_
#define MEDVEC_VECTOR_STORE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "medvec/matrix.h"
#include "medvec/model_io.h"
#include "medvec/trainer.h"

namespace medvec {

inline constexpr std::size_t kDefaultTopK = 40;

struct Neighbor {
  std::string word;
  double similarity = 0;

  bool operator==(const Neighbor&) const = default;
};

// Sorted by similarity descending, equal similarities by word ascending.
using QueryResult = std::vector<Neighbor>;

// Throws UndefinedSimilarityError if either vector has zero norm.
double cosine(std::span<const float> u, std::span<const float> v);
double cosine(std::span<const double> u, std::span<const double> v);

// Immutable after construction; all queries are const and thread-safe.
class VectorStore {
 public:
  VectorStore(std::vector<std::string> words, DenseMatrix<float> vectors,
              std::vector<std::int64_t> counts = {});

  static VectorStore from_model(const EmbeddingModel& model);

  // Loads a vector file. Word frequencies come from `vocab_path` when given
  // ("word<TAB>count" lines); otherwise they stay unknown.
  static VectorStore load(const std::filesystem::path& model_path,
                          const std::filesystem::path& vocab_path = {});

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return vectors_.cols(); }
  const std::string& word(std::size_t i) const { return words_[i]; }
  const std::vector<std::string>& words() const { return words_; }
  std::span<const float> vector(std::size_t i) const { return vectors_.row(i); }

  // Corpus frequency of word i. Without stored counts, a stand-in that
  // decreases with the row index (rows are in count order).
  std::int64_t count(std::size_t i) const;
  bool has_counts() const { return !counts_.empty(); }

  std::int32_t index_of(std::string_view word) const;
  bool contains(std::string_view word) const { return index_of(word) >= 0; }

  // Top-k words by cosine to `word`, excluding `word`. Throws NotFoundError.
  QueryResult distance(std::string_view word, std::size_t k = kDefaultTopK) const;

  // Top-k words by cosine to n(a) - n(b) + n(c), n = unit normalization,
  // excluding a, b and c. Throws NotFoundError listing every missing word.
  QueryResult analogy(std::string_view a, std::string_view b, std::string_view c,
                      std::size_t k = kDefaultTopK) const;

  // Top-k rows by cosine to `query`, skipping `exclude` and zero-norm rows.
  QueryResult nearest(std::span<const double> query,
                      std::span<const std::int32_t> exclude, std::size_t k) const;

 private:
  std::vector<double> unit(std::size_t i) const;

  std::vector<std::string> words_;
  DenseMatrix<float> vectors_;
  std::vector<double> norms_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, std::int32_t> index_;
};

}  // namespace medvec

#endif  // MEDVEC_VECTOR_STORE_H_
