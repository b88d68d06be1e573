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

// Skip-gram / CBOW training with hierarchical softmax and negative sampling.
//
// The update kernels are templates so the same code path runs in float for
// training and in double for gradient verification.

#ifndef MEDVEC_TRAINER_H_
#define MEDVEC_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medvec/error.h"
#include "medvec/matrix.h"
#include "medvec/sigmoid.h"
#include "medvec/vocabulary.h"

namespace medvec {

enum class Architecture { kSkipGram, kCbow };

std::string_view to_string(Architecture arch);
Architecture parse_architecture(std::string_view name);  // "sg" | "cbow"

struct TrainingConfig {
  Architecture architecture = Architecture::kSkipGram;
  int dim = 200;
  int window = 5;
  bool hs = true;
  int negative = 0;
  double sample = 1e-3;
  int epochs = 5;
  // Unset means 0.025 for skip-gram and 0.05 for CBOW.
  std::optional<double> alpha;
  // Unset means alpha * 1e-4.
  std::optional<double> min_alpha;
  int min_count = 5;
  int threads = 1;
  std::uint64_t seed = 1;
  SigmoidMode sigmoid = SigmoidMode::kTable;
  double unigram_power = UnigramTable::kDefaultPower;
  std::size_t unigram_table_size = UnigramTable::kDefaultSize;

  double initial_alpha() const;
  double final_alpha() const;

  // Throws ConfigError naming the first violated constraint.
  void validate() const;
};

template <typename Real>
struct ModelParams {
  DenseMatrix<Real> input;       // vocab x dim
  DenseMatrix<Real> hs_weights;  // inner nodes x dim, empty without hs
  DenseMatrix<Real> ns_weights;  // vocab x dim, empty without negatives
};

struct EmbeddingModel {
  Vocabulary vocab;
  TrainingConfig config;
  ModelParams<float> params;

  std::size_t dim() const { return params.input.cols(); }
};

// Input rows uniform in [-0.5/dim, 0.5/dim) from config.seed; output
// weights zero.
EmbeddingModel init_model(const Vocabulary& vocab, const TrainingConfig& config);

bool all_finite(const EmbeddingModel& model);

// Corpus as vocabulary indices. Out-of-vocabulary tokens are dropped and
// each input line is one sentence.
struct EncodedCorpus {
  std::vector<std::int32_t> tokens;
  std::vector<std::size_t> sentence_ends;  // exclusive end offsets
  std::uint64_t raw_tokens = 0;
  std::uint64_t oov_tokens = 0;

  std::size_t sentences() const { return sentence_ends.size(); }
  std::span<const std::int32_t> sentence(std::size_t i) const {
    const std::size_t begin = i == 0 ? 0 : sentence_ends[i - 1];
    return {tokens.data() + begin, sentence_ends[i] - begin};
  }
};

EncodedCorpus encode_corpus(std::istream& in, const Vocabulary& vocab);

// ---------------------------------------------------------------------------
// Update kernels.
//
// Each accumulate_* call reads the input vector x, adds its update for x into
// `x_update` and applies the output-weight updates in place. The caller adds
// `x_update` to the input row(s) once all objectives have run. With
// `with_loss` the negative log-likelihood of the visited outputs is returned
// (computed before the update), otherwise 0.

template <typename Real>
double accumulate_hs(std::span<const Real> x, std::span<Real> x_update,
                     DenseMatrix<Real>& node_weights,
                     std::span<const std::uint8_t> code,
                     std::span<const std::int32_t> path, Real alpha,
                     const Sigmoid& sigmoid, bool with_loss) {
  const std::size_t dim = x.size();
  double loss = 0;
  for (std::size_t j = 0; j < code.size(); ++j) {
    Real* w = node_weights.row(static_cast<std::size_t>(path[j])).data();
    Real dot = 0;
    for (std::size_t d = 0; d < dim; ++d) dot += x[d] * w[d];
    const double p = sigmoid(static_cast<double>(dot));
    const Real g = alpha * static_cast<Real>(1.0 - code[j] - p);
    for (std::size_t d = 0; d < dim; ++d) x_update[d] += g * w[d];
    for (std::size_t d = 0; d < dim; ++d) w[d] += g * x[d];
    if (with_loss) {
      loss += Sigmoid::neg_log(code[j] ? -static_cast<double>(dot)
                                       : static_cast<double>(dot));
    }
  }
  return loss;
}

template <typename Real>
double accumulate_ns(std::span<const Real> x, std::span<Real> x_update,
                     DenseMatrix<Real>& output_weights, std::int32_t target,
                     std::span<const std::int32_t> negatives, Real alpha,
                     const Sigmoid& sigmoid, bool with_loss) {
  const std::size_t dim = x.size();
  double loss = 0;
  auto step = [&](std::int32_t word, int label) {
    Real* w = output_weights.row(static_cast<std::size_t>(word)).data();
    Real dot = 0;
    for (std::size_t d = 0; d < dim; ++d) dot += x[d] * w[d];
    const double p = sigmoid(static_cast<double>(dot));
    const Real g = alpha * static_cast<Real>(label - p);
    for (std::size_t d = 0; d < dim; ++d) x_update[d] += g * w[d];
    for (std::size_t d = 0; d < dim; ++d) w[d] += g * x[d];
    if (with_loss) {
      loss += Sigmoid::neg_log(label ? static_cast<double>(dot)
                                     : -static_cast<double>(dot));
    }
  };
  step(target, 1);
  for (std::int32_t n : negatives) step(n, 0);
  return loss;
}

// Draws `k` negatives from `table`, redrawing any draw equal to `target`.
template <typename Rng>
void draw_negatives(const UnigramTable& table, int k, std::int32_t target,
                    Rng& rng, std::vector<std::int32_t>& out) {
  if (table.vocab_size() < 2) {
    throw ConfigError("negative sampling needs at least two vocabulary words");
  }
  out.clear();
  while (static_cast<int>(out.size()) < k) {
    const std::int32_t w = table.sample(rng);
    if (w != target) out.push_back(w);
  }
}

// Hierarchical-softmax step for one (input row, target word) pair, applying
// the accumulated input update at the end. Returns the loss contribution.
template <typename Real>
double hs_step(ModelParams<Real>& params, std::size_t input_row,
               const HuffmanCoding& coding, std::int32_t target, Real alpha,
               const Sigmoid& sigmoid) {
  std::span<Real> x = params.input.row(input_row);
  std::vector<Real> update(x.size(), Real{0});
  const double loss = accumulate_hs<Real>(
      x, update, params.hs_weights, coding.code(static_cast<std::size_t>(target)),
      coding.path(static_cast<std::size_t>(target)), alpha, sigmoid, true);
  for (std::size_t d = 0; d < x.size(); ++d) x[d] += update[d];
  return loss;
}

// Negative-sampling step with explicit negatives.
template <typename Real>
double ns_step(ModelParams<Real>& params, std::size_t input_row,
               std::int32_t target, std::span<const std::int32_t> negatives,
               Real alpha, const Sigmoid& sigmoid) {
  std::span<Real> x = params.input.row(input_row);
  std::vector<Real> update(x.size(), Real{0});
  const double loss = accumulate_ns<Real>(x, update, params.ns_weights, target,
                                          negatives, alpha, sigmoid, true);
  for (std::size_t d = 0; d < x.size(); ++d) x[d] += update[d];
  return loss;
}

// Negative-sampling step drawing `k` negatives from `table`.
template <typename Real, typename Rng>
double ns_step(ModelParams<Real>& params, std::size_t input_row,
               std::int32_t target, const UnigramTable& table, int k,
               Real alpha, Rng& rng, const Sigmoid& sigmoid) {
  if (k < 1) throw ConfigError("negative sample count must be >= 1");
  std::vector<std::int32_t> negatives;
  draw_negatives(table, k, target, rng, negatives);
  return ns_step<Real>(params, input_row, target, negatives, alpha, sigmoid);
}

// Objectives shared by the architecture-level updates. `coding` is null
// without hierarchical softmax; negative sampling runs iff
// params.ns_weights is non-empty.
struct Objectives {
  const HuffmanCoding* coding = nullptr;
  Sigmoid sigmoid;
};

// Skip-gram pair: the context word's input row predicts the centre word.
template <typename Real>
double skipgram_update(ModelParams<Real>& params, const Objectives& obj,
                       std::int32_t context_word, std::int32_t center,
                       std::span<const std::int32_t> negatives, Real alpha,
                       std::vector<Real>& scratch, bool with_loss) {
  std::span<Real> x = params.input.row(static_cast<std::size_t>(context_word));
  scratch.assign(x.size(), Real{0});
  double loss = 0;
  if (obj.coding != nullptr) {
    const auto w = static_cast<std::size_t>(center);
    loss += accumulate_hs<Real>(x, scratch, params.hs_weights,
                                obj.coding->code(w), obj.coding->path(w),
                                alpha, obj.sigmoid, with_loss);
  }
  if (!params.ns_weights.empty()) {
    loss += accumulate_ns<Real>(x, scratch, params.ns_weights, center,
                                negatives, alpha, obj.sigmoid, with_loss);
  }
  for (std::size_t d = 0; d < x.size(); ++d) x[d] += scratch[d];
  return loss;
}

// CBOW: the mean of the context rows predicts the centre word; each context
// row receives 1/n of the update for the mean.
template <typename Real>
double cbow_update(ModelParams<Real>& params, const Objectives& obj,
                   std::span<const std::int32_t> context, std::int32_t center,
                   std::span<const std::int32_t> negatives, Real alpha,
                   std::vector<Real>& mean, std::vector<Real>& scratch,
                   bool with_loss) {
  if (context.empty()) return 0;
  const std::size_t dim = params.input.cols();
  mean.assign(dim, Real{0});
  for (std::int32_t c : context) {
    const Real* row = params.input.row(static_cast<std::size_t>(c)).data();
    for (std::size_t d = 0; d < dim; ++d) mean[d] += row[d];
  }
  const Real inv = Real{1} / static_cast<Real>(context.size());
  for (std::size_t d = 0; d < dim; ++d) mean[d] *= inv;

  scratch.assign(dim, Real{0});
  double loss = 0;
  const std::span<const Real> x(mean);
  if (obj.coding != nullptr) {
    const auto w = static_cast<std::size_t>(center);
    loss += accumulate_hs<Real>(x, scratch, params.hs_weights,
                                obj.coding->code(w), obj.coding->path(w),
                                alpha, obj.sigmoid, with_loss);
  }
  if (!params.ns_weights.empty()) {
    loss += accumulate_ns<Real>(x, scratch, params.ns_weights, center,
                                negatives, alpha, obj.sigmoid, with_loss);
  }
  for (std::int32_t c : context) {
    Real* row = params.input.row(static_cast<std::size_t>(c)).data();
    for (std::size_t d = 0; d < dim; ++d) row[d] += scratch[d] * inv;
  }
  return loss;
}

// Linear decay from alpha0 at progress 0 to min_alpha at `total_updates`,
// flat afterwards.
class LearningRateSchedule {
 public:
  LearningRateSchedule(double alpha0, double min_alpha,
                       std::uint64_t total_updates);

  double at(std::uint64_t processed) const;

 private:
  double alpha0_;
  double min_alpha_;
  double total_;
};

struct TrainStats {
  std::uint64_t tokens_processed = 0;  // centre tokens surviving subsampling
  std::uint64_t tokens_discarded = 0;  // removed by subsampling
  std::uint64_t pair_updates = 0;      // (input, target) updates applied
  double seconds = 0;
  double final_alpha = 0;
  // Alpha at every schedule refresh of worker 0, in order.
  std::vector<double> alpha_trace;

  double tokens_per_second() const {
    return seconds > 0 ? static_cast<double>(tokens_processed) / seconds : 0;
  }
};

// Trains on an encoded corpus. `vocab` must be the vocabulary the corpus
// was encoded with.
EmbeddingModel train(const EncodedCorpus& corpus, const Vocabulary& vocab,
                     const TrainingConfig& config, TrainStats* stats = nullptr);

// Reads a preprocessed corpus file twice: once to count the vocabulary and
// once to encode it.
EmbeddingModel train_file(const std::filesystem::path& corpus,
                          const TrainingConfig& config,
                          TrainStats* stats = nullptr);

}  // namespace medvec

#endif  // MEDVEC_TRAINER_H_
