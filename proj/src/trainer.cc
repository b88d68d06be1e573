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

#include "medvec/trainer.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <random>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "medvec/io.h"

namespace medvec {
namespace {

constexpr std::uint64_t kRefreshInterval = 10000;

struct Shard {
  std::size_t begin = 0;  // sentence indices
  std::size_t end = 0;
};

// Contiguous sentence ranges holding roughly equal token counts.
std::vector<Shard> make_shards(const EncodedCorpus& corpus, int parts) {
  std::vector<Shard> shards;
  const std::size_t total = corpus.tokens.size();
  std::size_t begin = 0;
  for (int p = 0; p < parts; ++p) {
    const std::size_t goal = total * static_cast<std::size_t>(p + 1) /
                             static_cast<std::size_t>(parts);
    std::size_t end = begin;
    while (end < corpus.sentences() &&
           (p == parts - 1 || corpus.sentence_ends[end] <= goal)) {
      ++end;
    }
    shards.push_back({begin, end});
    begin = end;
  }
  return shards;
}

struct SharedState {
  const EncodedCorpus& corpus;
  const TrainingConfig& config;
  const Objectives& objectives;
  const UnigramTable* unigram;
  const std::vector<double>& keep;
  const LearningRateSchedule& schedule;
  ModelParams<float>& params;
  std::atomic<std::uint64_t> processed{0};
};

void run_worker(SharedState& shared, const Shard& shard, int worker,
                TrainStats& stats) {
  const TrainingConfig& config = shared.config;
  std::seed_seq seq{static_cast<std::uint64_t>(config.seed),
                    static_cast<std::uint64_t>(worker)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> span_draw(1, config.window);

  std::vector<std::int32_t> sentence;
  std::vector<std::uint32_t> credit;  // raw tokens accounted by each position
  std::vector<std::int32_t> negatives;
  std::vector<std::int32_t> context;
  std::vector<float> scratch;
  std::vector<float> mean;
  std::uint64_t pending = 0;
  double alpha = shared.schedule.at(0);
  if (worker == 0) stats.alpha_trace.push_back(alpha);

  auto refresh = [&] {
    const std::uint64_t done = shared.processed.fetch_add(pending) + pending;
    pending = 0;
    alpha = shared.schedule.at(done);
    if (worker == 0) stats.alpha_trace.push_back(alpha);
  };

  const bool use_ns = !shared.params.ns_weights.empty();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t s = shard.begin; s < shard.end; ++s) {
      sentence.clear();
      credit.clear();
      std::uint32_t run = 0;
      for (std::int32_t w : shared.corpus.sentence(s)) {
        ++run;
        const double keep = shared.keep[static_cast<std::size_t>(w)];
        if (keep < 1.0 && coin(rng) >= keep) {
          ++stats.tokens_discarded;
          continue;
        }
        sentence.push_back(w);
        credit.push_back(run);
        run = 0;
      }
      pending += run;  // trailing discarded tokens

      const auto n = static_cast<std::ptrdiff_t>(sentence.size());
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        pending += credit[static_cast<std::size_t>(i)];
        if (pending >= kRefreshInterval) refresh();
        ++stats.tokens_processed;

        const std::int32_t center = sentence[static_cast<std::size_t>(i)];
        const int b = span_draw(rng);
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - b);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + b);
        const auto a = static_cast<float>(alpha);

        if (config.architecture == Architecture::kSkipGram) {
          for (std::ptrdiff_t j = lo; j <= hi; ++j) {
            if (j == i) continue;
            if (use_ns) {
              draw_negatives(*shared.unigram, config.negative, center, rng,
                             negatives);
            }
            skipgram_update<float>(shared.params, shared.objectives,
                                   sentence[static_cast<std::size_t>(j)],
                                   center, negatives, a, scratch, false);
            ++stats.pair_updates;
          }
        } else {
          context.clear();
          for (std::ptrdiff_t j = lo; j <= hi; ++j) {
            if (j != i) context.push_back(sentence[static_cast<std::size_t>(j)]);
          }
          if (context.empty()) continue;
          if (use_ns) {
            draw_negatives(*shared.unigram, config.negative, center, rng,
                           negatives);
          }
          cbow_update<float>(shared.params, shared.objectives, context, center,
                             negatives, a, mean, scratch, false);
          ++stats.pair_updates;
        }
      }
    }
  }
  refresh();
  stats.final_alpha = alpha;
}

}  // namespace

std::string_view to_string(Architecture arch) {
  return arch == Architecture::kSkipGram ? "sg" : "cbow";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "sg" || name == "skip-gram" || name == "skipgram") {
    return Architecture::kSkipGram;
  }
  if (name == "cbow") return Architecture::kCbow;
  throw ConfigError("unknown architecture '" + std::string(name) +
                    "' (expected sg or cbow)");
}

double TrainingConfig::initial_alpha() const {
  if (alpha) return *alpha;
  return architecture == Architecture::kSkipGram ? 0.025 : 0.05;
}

double TrainingConfig::final_alpha() const {
  if (min_alpha) return *min_alpha;
  return initial_alpha() * 1e-4;
}

void TrainingConfig::validate() const {
  if (!hs && negative <= 0) {
    throw ConfigError(
        "no training objective: enable hierarchical softmax (hs=1) or set "
        "negative > 0");
  }
  if (negative < 0) throw ConfigError("negative must be >= 0");
  if (dim <= 0) throw ConfigError("dim must be > 0");
  if (window <= 0) throw ConfigError("window must be > 0");
  if (!(sample >= 0 && sample < 1)) throw ConfigError("sample must be in [0, 1)");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (min_count < 1) throw ConfigError("min_count must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  const double a0 = initial_alpha();
  const double a1 = final_alpha();
  if (!(a1 > 0 && a1 <= a0)) {
    throw ConfigError("learning rates must satisfy 0 < min_alpha <= alpha");
  }
  if (!(unigram_power > 0)) throw ConfigError("unigram power must be > 0");
}

EmbeddingModel init_model(const Vocabulary& vocab,
                          const TrainingConfig& config) {
  config.validate();
  if (vocab.empty()) throw ConfigError("cannot initialize a model without words");
  const auto dim = static_cast<std::size_t>(config.dim);
  EmbeddingModel model{vocab, config, {}};
  model.params.input = DenseMatrix<float>(vocab.size(), dim);
  std::mt19937_64 rng(config.seed);
  const float bound = 0.5f / static_cast<float>(dim);
  std::uniform_real_distribution<float> init(-bound, bound);
  for (float& v : model.params.input.data()) v = init(rng);
  if (config.hs) {
    model.params.hs_weights =
        DenseMatrix<float>(std::max<std::size_t>(vocab.size() - 1, 1), dim);
  }
  if (config.negative > 0) {
    model.params.ns_weights = DenseMatrix<float>(vocab.size(), dim);
  }
  return model;
}

bool all_finite(const EmbeddingModel& model) {
  auto finite = [](const DenseMatrix<float>& m) {
    return std::all_of(m.data().begin(), m.data().end(),
                       [](float v) { return std::isfinite(v); });
  };
  return finite(model.params.input) && finite(model.params.hs_weights) &&
         finite(model.params.ns_weights);
}

EncodedCorpus encode_corpus(std::istream& in, const Vocabulary& vocab) {
  EncodedCorpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string word;
    const std::size_t before = corpus.tokens.size();
    while (words >> word) {
      ++corpus.raw_tokens;
      const std::int32_t id = vocab.index_of(word);
      if (id < 0) {
        ++corpus.oov_tokens;
      } else {
        corpus.tokens.push_back(id);
      }
    }
    if (corpus.tokens.size() > before) {
      corpus.sentence_ends.push_back(corpus.tokens.size());
    }
  }
  if (in.bad()) throw InputError("failed reading corpus");
  return corpus;
}

LearningRateSchedule::LearningRateSchedule(double alpha0, double min_alpha,
                                           std::uint64_t total_updates)
    : alpha0_(alpha0),
      min_alpha_(min_alpha),
      total_(static_cast<double>(std::max<std::uint64_t>(total_updates, 1))) {}

double LearningRateSchedule::at(std::uint64_t processed) const {
  const double progress = std::min(1.0, static_cast<double>(processed) / total_);
  return std::max(min_alpha_, alpha0_ - (alpha0_ - min_alpha_) * progress);
}

EmbeddingModel train(const EncodedCorpus& corpus, const Vocabulary& vocab,
                     const TrainingConfig& config, TrainStats* stats) {
  config.validate();
  if (corpus.tokens.empty()) {
    throw Error("corpus is empty: no in-vocabulary tokens to train on");
  }
  if (corpus.raw_tokens > 0 && corpus.oov_tokens * 2 > corpus.raw_tokens) {
    spdlog::warn(
        "{} of {} corpus tokens are out of vocabulary; was the vocabulary built "
        "from this corpus?",
        corpus.oov_tokens, corpus.raw_tokens);
  }
  if (config.negative > 0 && vocab.size() < 2) {
    throw ConfigError("negative sampling needs at least two vocabulary words");
  }

  EmbeddingModel model = init_model(vocab, config);
  HuffmanCoding coding;
  if (config.hs) coding = build_huffman(vocab);
  UnigramTable unigram;
  if (config.negative > 0) {
    unigram = UnigramTable(vocab, config.unigram_power, config.unigram_table_size);
  }
  Objectives objectives{config.hs ? &coding : nullptr, Sigmoid(config.sigmoid)};

  std::vector<double> keep(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    keep[i] = keep_probability(vocab[i].count, vocab.total_tokens(), config.sample);
  }

  const std::uint64_t total =
      static_cast<std::uint64_t>(config.epochs) * corpus.tokens.size();
  LearningRateSchedule schedule(config.initial_alpha(), config.final_alpha(),
                                total);
  SharedState shared{corpus,
                     config,
                     objectives,
                     config.negative > 0 ? &unigram : nullptr,
                     keep,
                     schedule,
                     model.params};

  const int workers = std::max(1, std::min<int>(config.threads,
                                                static_cast<int>(corpus.sentences())));
  const std::vector<Shard> shards = make_shards(corpus, workers);
  std::vector<TrainStats> per_worker(static_cast<std::size_t>(workers));

  const auto start = std::chrono::steady_clock::now();
  if (workers == 1) {
    run_worker(shared, shards[0], 0, per_worker[0]);
  } else {
    // Workers update the shared matrices without locking.
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          run_worker(shared, shards[static_cast<std::size_t>(w)], w,
                     per_worker[static_cast<std::size_t>(w)]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  TrainStats summary;
  summary.seconds = seconds;
  summary.alpha_trace = std::move(per_worker[0].alpha_trace);
  summary.final_alpha = per_worker[0].final_alpha;
  for (const TrainStats& s : per_worker) {
    summary.tokens_processed += s.tokens_processed;
    summary.tokens_discarded += s.tokens_discarded;
    summary.pair_updates += s.pair_updates;
    summary.final_alpha = std::min(summary.final_alpha, s.final_alpha);
  }
  spdlog::info("trained {} {}d: {} tokens in {:.1f}s ({:.0f} tokens/s, {} updates)",
               to_string(config.architecture), config.dim,
               summary.tokens_processed, seconds, summary.tokens_per_second(),
               summary.pair_updates);
  if (stats != nullptr) *stats = std::move(summary);
  return model;
}

EmbeddingModel train_file(const std::filesystem::path& corpus_path,
                          const TrainingConfig& config, TrainStats* stats) {
  config.validate();
  std::ifstream in = open_input(corpus_path);
  if (in.peek() == std::char_traits<char>::eof()) {
    throw Error(corpus_path.string() + ": corpus is empty");
  }
  const Vocabulary vocab =
      Vocabulary::build(in, static_cast<std::int64_t>(config.min_count));
  in.clear();
  in.seekg(0);
  const EncodedCorpus corpus = encode_corpus(in, vocab);
  return train(corpus, vocab, config, stats);
}

}  // namespace medvec
