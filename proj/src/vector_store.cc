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

#include "medvec/vector_store.h"

#include <algorithm>
#include <cmath>

#include "medvec/error.h"

namespace medvec {
namespace {

template <typename A, typename B>
double dot(std::span<A> u, std::span<B> v) {
  double sum = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  }
  return sum;
}

template <typename T>
double cosine_impl(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) throw Error("cosine: dimension mismatch");
  const double nu = std::sqrt(dot(u, u));
  const double nv = std::sqrt(dot(v, v));
  if (nu == 0 || nv == 0) {
    throw UndefinedSimilarityError("cosine similarity of a zero-norm vector");
  }
  return dot(u, v) / (nu * nv);
}

}  // namespace

NotFoundError::NotFoundError(std::vector<std::string> words)
    : Error([&] {
        std::string msg = "not in vocabulary:";
        for (const std::string& w : words) msg += " '" + w + "'";
        return msg;
      }()),
      words_(std::move(words)) {}

double cosine(std::span<const float> u, std::span<const float> v) {
  return cosine_impl(u, v);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  return cosine_impl(u, v);
}

VectorStore::VectorStore(std::vector<std::string> words,
                         DenseMatrix<float> vectors,
                         std::vector<std::int64_t> counts)
    : words_(std::move(words)),
      vectors_(std::move(vectors)),
      counts_(std::move(counts)) {
  if (words_.size() != vectors_.rows()) {
    throw Error("vector store: word count does not match vector rows");
  }
  if (!counts_.empty() && counts_.size() != words_.size()) {
    throw Error("vector store: count list does not match vocabulary");
  }
  norms_.resize(words_.size());
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    norms_[i] = std::sqrt(dot(vectors_.row(i), vectors_.row(i)));
    if (!index_.emplace(words_[i], static_cast<std::int32_t>(i)).second) {
      throw Error("vector store: duplicate word '" + words_[i] + "'");
    }
  }
}

VectorStore VectorStore::from_model(const EmbeddingModel& model) {
  std::vector<std::string> words;
  std::vector<std::int64_t> counts;
  bool any_count = false;
  for (const VocabEntry& e : model.vocab.entries()) {
    words.push_back(e.word);
    counts.push_back(e.count);
    any_count = any_count || e.count > 0;
  }
  if (!any_count) counts.clear();
  return VectorStore(std::move(words), model.params.input, std::move(counts));
}

VectorStore VectorStore::load(const std::filesystem::path& model_path,
                              const std::filesystem::path& vocab_path) {
  WordVectors wv = load_vectors(model_path);
  std::vector<std::int64_t> counts;
  if (!vocab_path.empty()) {
    const Vocabulary vocab = Vocabulary::load_tsv(vocab_path);
    counts.resize(wv.words.size(), 0);
    for (std::size_t i = 0; i < wv.words.size(); ++i) {
      const std::int32_t idx = vocab.index_of(wv.words[i]);
      if (idx >= 0) counts[i] = vocab[static_cast<std::size_t>(idx)].count;
    }
  }
  return VectorStore(std::move(wv.words), std::move(wv.vectors), std::move(counts));
}

std::int64_t VectorStore::count(std::size_t i) const {
  if (!counts_.empty()) return counts_[i];
  return static_cast<std::int64_t>(words_.size() - i);
}

std::int32_t VectorStore::index_of(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? -1 : it->second;
}

std::vector<double> VectorStore::unit(std::size_t i) const {
  if (norms_[i] == 0) {
    throw UndefinedSimilarityError("word '" + words_[i] + "' has a zero vector");
  }
  std::vector<double> out(dim());
  std::span<const float> v = vectors_.row(i);
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = v[d] / norms_[i];
  return out;
}

QueryResult VectorStore::nearest(std::span<const double> query,
                                 std::span<const std::int32_t> exclude,
                                 std::size_t k) const {
  if (query.size() != dim()) throw Error("query dimension mismatch");
  const double qn = std::sqrt(dot(query, query));
  if (qn == 0) throw UndefinedSimilarityError("query vector has zero norm");

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (norms_[i] == 0) continue;
    if (std::find(exclude.begin(), exclude.end(), static_cast<std::int32_t>(i)) !=
        exclude.end()) {
      continue;
    }
    scored.emplace_back(dot(query, vectors_.row(i)) / (qn * norms_[i]), i);
  }
  auto before = [this](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return words_[x.second] < words_[y.second];
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n),
                    scored.end(), before);
  QueryResult result;
  result.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.push_back({words_[scored[i].second], scored[i].first});
  }
  return result;
}

QueryResult VectorStore::distance(std::string_view word, std::size_t k) const {
  const std::int32_t idx = index_of(word);
  if (idx < 0) throw NotFoundError({std::string(word)});
  const std::vector<double> query = unit(static_cast<std::size_t>(idx));
  const std::int32_t exclude[] = {idx};
  return nearest(query, exclude, k);
}

QueryResult VectorStore::analogy(std::string_view a, std::string_view b,
                                 std::string_view c, std::size_t k) const {
  const std::int32_t ids[] = {index_of(a), index_of(b), index_of(c)};
  std::vector<std::string> missing;
  const std::string_view names[] = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    if (ids[i] < 0 && std::find(missing.begin(), missing.end(), names[i]) ==
                          missing.end()) {
      missing.emplace_back(names[i]);
    }
  }
  if (!missing.empty()) throw NotFoundError(std::move(missing));

  const std::vector<double> ua = unit(static_cast<std::size_t>(ids[0]));
  const std::vector<double> ub = unit(static_cast<std::size_t>(ids[1]));
  const std::vector<double> uc = unit(static_cast<std::size_t>(ids[2]));
  std::vector<double> query(dim());
  for (std::size_t d = 0; d < query.size(); ++d) query[d] = (ua[d] - ub[d]) + uc[d];
  return nearest(query, ids, k);
}

}  // namespace medvec
