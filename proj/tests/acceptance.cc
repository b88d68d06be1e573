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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/core.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "medvec/cli.h"
#include "medvec/error.h"
#include "medvec/io.h"
#include "medvec/model_io.h"
#include "medvec/relation_eval.h"
#include "medvec/service.h"
#include "medvec/text.h"
#include "medvec/trainer.h"
#include "medvec/vector_store.h"
#include "medvec/vocabulary.h"
#include "support/gradient_check.h"
#include "support/oracles.h"
#include "support/planted.h"
#include "support/random_store.h"
#include "support/service_text.h"
#include "support/temp_dir.h"

namespace {

using namespace medvec;
using Clock = std::chrono::steady_clock;

const std::filesystem::path kData = MEDVEC_TEST_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), {"medvec", "--quiet"});
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

// Last CSV field of every data row.
std::vector<std::string> accuracy_column(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) out.push_back(line.substr(line.rfind(',') + 1));
  return out;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Shared planted corpus and gold file for criteria 4, 5 and 9.
struct Planted {
  testing::TempDir dir;
  std::filesystem::path corpus = dir.path() / "planted.txt";
  std::filesystem::path gold = dir.path() / "planted_gold.tsv";
  testing::PlantedCorpus pairs;

  Planted() {
    pairs = testing::write_planted_corpus(corpus, testing::PlantedSpec{});
    testing::write_planted_gold(gold, pairs);
  }
};

Planted& planted() {
  static Planted p;
  return p;
}

Outcome gradients() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> vocab(2, 8), dim(1, 6);
  std::uniform_int_distribution<int> negative(1, 5);
  double worst = 0;
  const auto start = Clock::now();
  for (int i = 0; i < 100; ++i) {
    testing::GradientCase c;
    c.arch = i % 2 == 0 ? Architecture::kSkipGram : Architecture::kCbow;
    c.vocab = vocab(rng);
    c.dim = dim(rng);
    switch ((i / 2) % 3) {
      case 0: c.hs = true; c.negative = 0; break;
      case 1: c.hs = false; c.negative = negative(rng); break;
      default: c.hs = true; c.negative = negative(rng); break;
    }
    worst = std::max(worst, testing::check_gradient(c, rng).worst());
  }
  const double t = seconds_since(start);
  return {worst < 1e-5 && t < 10,
          fmt::format("100 instances, worst relative error {:.3g}, {:.2f}s", worst, t)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<std::size_t> words(2, 1000), dim(1, 50);
  std::size_t queries = 0, mismatches = 0;
  const auto start = Clock::now();
  for (int m = 0; m < 50; ++m) {
    const testing::RawModel raw = testing::random_model(words(rng), dim(rng), rng);
    const VectorStore store = raw.store();
    const std::size_t n = raw.words.size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t ks[] = {1, 10, kDefaultTopK, n};
    for (int q = 0; q < 20; ++q) {
      const std::size_t k = ks[q % 4];
      const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
      auto same = [&](const QueryResult& got, const std::vector<testing::ScanHit>& want) {
        if (got.size() != want.size()) return false;
        for (std::size_t i = 0; i < got.size(); ++i) {
          if (got[i].word != want[i].word) return false;
        }
        return true;
      };
      mismatches += !same(store.distance(raw.words[a], k),
                          testing::brute_force_distance(raw.words, raw.vectors, a, k));
      mismatches += !same(store.analogy(raw.words[a], raw.words[b], raw.words[c], k),
                          testing::brute_force_analogy(raw.words, raw.vectors, a, b, c, k));
      queries += 2;
    }
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 30,
          fmt::format("{} queries on 50 models, {} mismatches, {:.2f}s", queries, mismatches, t)};
}

Outcome huffman() {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<std::int64_t> count(1, 100);
  std::size_t failures = 0, cases = 0;
  const auto start = Clock::now();
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::int64_t> c(n);
      for (auto& x : c) x = count(rng);
      std::sort(c.rbegin(), c.rend());
      const HuffmanCoding h = build_huffman(c);
      std::size_t longest = 0;
      for (std::size_t w = 0; w < n; ++w) longest = std::max(longest, h.code(w).size());
      std::uint64_t kraft = 0;
      std::int64_t cost = 0;
      for (std::size_t w = 0; w < n; ++w) {
        kraft += std::uint64_t{1} << (longest - h.code(w).size());
        cost += c[w] * static_cast<std::int64_t>(h.code(w).size());
      }
      const bool ok = kraft == (std::uint64_t{1} << longest) &&
                      cost == testing::optimal_code_cost(c);
      failures += !ok;
      ++cases;
    }
  }
  const double t = seconds_since(start);
  return {failures == 0 && t < 10,
          fmt::format("{} count assignments over sizes 1..8, {} failures, {:.2f}s", cases,
                      failures, t)};
}

Outcome planted_relation() {
  Planted& p = planted();
  const std::string model = (p.dir.path() / "planted.bin").string();
  const auto start = Clock::now();
  const CliRun trained = cli({"train", "--input", p.corpus.string(), "--output", model, "--arch",
                              "sg", "--hs", "1", "--negative", "0", "--dim", "50", "--window",
                              "5", "--epochs", "5", "--threads", "1", "--seed", "1"});
  if (trained.code != 0) return {false, "train failed: " + trained.err};
  double accuracy[2] = {-1, -1};
  const char* tools[] = {"analogy", "distance"};
  for (int i = 0; i < 2; ++i) {
    const CliRun r = cli({"evaluate", "--model", model, "--gold", p.gold.string(), "--predicate",
                          "may_treat", "--tool", tools[i], "--top", "40"});
    if (r.code != 0) return {false, std::string("evaluate failed: ") + r.err};
    accuracy[i] = std::stod(accuracy_column(r.out).at(0));
  }
  const double t = seconds_since(start);
  return {accuracy[0] >= 0.5 && accuracy[0] > accuracy[1] && t < 300,
          fmt::format("analogy {:.4f}, distance {:.4f} at k=40, {:.1f}s", accuracy[0],
                      accuracy[1], t)};
}

Outcome sweep_shape() {
  Planted& p = planted();
  const auto start = Clock::now();
  auto run = [&](const std::string& windows, const std::string& dims, std::size_t expected,
                 std::string& note) {
    const std::string out = (p.dir.path() / ("sweep_" + dims + ".csv")).string();
    const CliRun r = cli({"sweep", "--corpus", p.corpus.string(), "--gold", p.gold.string(),
                          "--arch", "sg,cbow", "--windows", windows, "--dims", dims, "--tools",
                          "analogy", "--predicates", "may_treat", "--epochs", "1", "--threads",
                          "1", "--out", out});
    if (r.code != 0) {
      note += "sweep failed: " + r.err;
      return false;
    }
    const std::vector<std::string> acc = accuracy_column(read_file(out));
    bool ok = acc.size() == expected;
    for (const std::string& a : acc) {
      ok = ok && !a.empty() && std::stod(a) >= 0.0 && std::stod(a) <= 1.0;
    }
    note += fmt::format("{} rows (want {}) ", acc.size(), expected);
    return ok;
  };
  std::string note;
  const bool windows_ok = run("5,10,20", "200", 6, note);
  const bool dims_ok = run("5", "200,300,500,800", 8, note);
  const double t = seconds_since(start);
  return {windows_ok && dims_ok && t < 1800, fmt::format("{}{:.1f}s", note, t)};
}

Outcome determinism() {
  testing::TempDir dir;
  const auto corpus = dir.path() / "toy.txt";
  preprocess_corpus(kData / "toy_corpus.txt", MultiwordDictionary::load(kData / "terms.txt"),
                    corpus);
  TrainingConfig cfg;
  cfg.dim = 30;
  cfg.epochs = 3;
  cfg.min_count = 1;
  cfg.negative = 3;
  cfg.threads = 1;
  cfg.seed = 99;
  const auto a = dir.path() / "a.bin";
  const auto b = dir.path() / "b.bin";
  save_model(train_file(corpus, cfg), a, true);
  save_model(train_file(corpus, cfg), b, true);
  const bool identical = read_file(a) == read_file(b) &&
                         read_file(weights_path(a)) == read_file(weights_path(b));

  EmbeddingModel loaded = load_model(a);
  load_weights(a, loaded);
  const auto c = dir.path() / "c.bin";
  save_model(loaded, c, true);
  const bool round_trip =
      read_file(a) == read_file(c) && read_file(weights_path(a)) == read_file(weights_path(c));

  const WordVectors golden = load_vectors(kData / "golden.bin");
  const float expected[] = {1.0f, -2.5f, 0.125f, 0.0f, 0.5f, 1024.0f};
  bool golden_ok = golden.words == std::vector<std::string>{"ab", "c"} &&
                   golden.vectors.rows() == 2 && golden.vectors.cols() == 3;
  for (std::size_t i = 0; golden_ok && i < 6; ++i) {
    golden_ok = golden.vectors.data()[i] == expected[i];
  }
  return {identical && round_trip && golden_ok,
          fmt::format("repeat runs identical: {}, round trip identical: {}, golden fixture: {}",
                      identical, round_trip, golden_ok)};
}

std::string preprocess_string(const std::string& raw, const MultiwordDictionary& dict) {
  std::istringstream in(raw);
  std::ostringstream out;
  preprocess_corpus(in, dict, out);
  return out.str();
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

Outcome preprocessing() {
  MultiwordDictionary dict;
  dict.add("Glucose Metabolism Disorder");
  dict.add("heart attack");
  const bool examples =
      normalize_text("diabetes.") == TokenStream{"diabetes"} &&
      normalize_text("Diabetes, DIABETES diabetes") ==
          TokenStream{"diabetes", "diabetes", "diabetes"} &&
      dict.contains("glucose metabolism disorder") &&
      merge_multiwords(TokenStream{"glucose", "metabolism", "disorder"}, dict) ==
          TokenStream{"glucose_metabolism_disorder"};

  std::mt19937_64 rng(77);
  const std::vector<std::string> pieces{
      "glucose", "metabolism", "disorder", "heart", "attack", "Heart", "ATTACK", "a", "B9",
      "non-small-cell", "_x_", "--", "-", "_", ".", ",", "'", "[", "]", " ", "  ", "\n", "\t",
      "\xC3\xA9", "\xC3\x84", "100mg", "aspirin's", "(", ")", "\xCE\xA9", "z"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1), len(0, 40);
  std::size_t broken = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string raw;
    for (std::size_t n = len(rng); n > 0; --n) raw += pieces[pick(rng)];
    const std::string once = preprocess_string(raw, dict);
    const std::string twice = preprocess_string(once, dict);
    broken += split_ws(once) != split_ws(twice);
  }
  return {examples && broken == 0,
          fmt::format("examples: {}, idempotence failures: {}/1000", examples, broken)};
}

Outcome service_parity() {
  const std::filesystem::path model = kData / "toy_model.txt";
  ServiceConfig config;
  config.port = 0;
  config.model_path = model;
  QueryService service(config);
  const int port = service.bind();
  service.load_model();
  std::thread server([&] { service.serve(); });

  const VectorStore store = VectorStore::load(model);
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  std::mt19937_64 rng(8080);
  std::uniform_int_distribution<std::size_t> pick(0, store.size() - 1), top(0, 70);
  std::size_t mismatches = 0, full_defaults = 0, defaults = 0;
  for (int q = 0; q < 100; ++q) {
    const bool use_default = q % 3 == 0;
    const std::string k = std::to_string(top(rng));
    std::vector<std::string> args;
    std::string path;
    if (q % 2 == 0) {
      const std::string w = store.word(pick(rng));
      args = {"distance", "--model", model.string(), "--word", w};
      path = "/distance?word=" + w;
    } else {
      const std::string a = store.word(pick(rng)), b = store.word(pick(rng)),
                        c = store.word(pick(rng));
      args = {"analogy", "--model", model.string(), "--a", a, "--b", b, "--c", c};
      path = "/analogy?a=" + a + "&b=" + b + "&c=" + c;
    }
    if (!use_default) {
      args.insert(args.end(), {"--top", k});
      path += "&top=" + k;
    }
    const CliRun expected = cli(args);
    const auto got = client.Get(path);
    const bool same = got && expected.code == 0 && got->status == 200 &&
                      testing::lines_from_body(got->body) == expected.out;
    mismatches += !same;
    if (use_default && got) {
      ++defaults;
      const auto lines = std::count(expected.out.begin(), expected.out.end(), '\n');
      full_defaults += lines == static_cast<long>(kDefaultTopK);
    }
  }
  service.stop();
  server.join();
  return {mismatches == 0 && full_defaults == defaults,
          fmt::format("100 queries, {} mismatches, {}/{} default queries with 40 entries",
                      mismatches, full_defaults, defaults)};
}

Outcome throughput() {
  Planted& p = planted();
  TrainingConfig cfg;
  cfg.architecture = Architecture::kSkipGram;
  cfg.hs = true;
  cfg.negative = 0;
  cfg.dim = 100;
  cfg.window = 5;
  cfg.epochs = 1;
  cfg.threads = 1;
  TrainStats stats;
  train_file(p.corpus, cfg, &stats);
  const double rate = stats.tokens_per_second();
  return {rate >= 50'000, fmt::format("{:.0f} tokens/s at dim 100 over {} tokens", rate,
                                      stats.tokens_processed)};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, gradients},     {2, oracle_equivalence}, {3, huffman},
      {4, planted_relation}, {5, sweep_shape},     {6, determinism},
      {7, preprocessing}, {8, service_parity},     {9, throughput}};
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
