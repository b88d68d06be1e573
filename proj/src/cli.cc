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

#include "medvec/cli.h"

#include <csignal>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "medvec/error.h"
#include "medvec/io.h"
#include "medvec/model_io.h"
#include "medvec/relation_eval.h"
#include "medvec/service.h"
#include "medvec/text.h"
#include "medvec/trainer.h"
#include "medvec/vector_store.h"

namespace medvec::cli {
namespace {

namespace fs = std::filesystem;

struct TrainFlags {
  std::string arch = "sg";
  int dim = 200;
  int window = 5;
  int hs = 1;
  int negative = 0;
  double sample = 1e-3;
  int epochs = 5;
  double alpha = 0;
  double min_alpha = 0;
  int min_count = 5;
  int threads = 1;
  std::uint64_t seed = 1;
  std::string sigmoid = "table";

  void add_to(CLI::App* cmd, bool with_shape) {
    if (with_shape) {
      cmd->add_option("--arch", arch, "Architecture: sg or cbow")
          ->check(CLI::IsMember({"sg", "cbow"}));
      cmd->add_option("--dim", dim, "Vector dimensionality");
      cmd->add_option("--window", window, "Maximum context span per side");
    }
    cmd->add_option("--hs", hs, "Hierarchical softmax (0 or 1)")
        ->check(CLI::IsMember({0, 1}));
    cmd->add_option("--negative", negative, "Negative samples per target (0 = off)");
    cmd->add_option("--sample", sample, "Subsampling threshold (0 = off)");
    cmd->add_option("--epochs", epochs, "Passes over the corpus");
    cmd->add_option("--alpha", alpha,
                    "Initial learning rate (0 = 0.025 for sg, 0.05 for cbow)");
    cmd->add_option("--min-alpha", min_alpha, "Final learning rate (0 = alpha * 1e-4)");
    cmd->add_option("--min-count", min_count, "Discard words rarer than this");
    cmd->add_option("--threads", threads, "Training threads");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--sigmoid", sigmoid, "Sigmoid evaluation: table or exact")
        ->check(CLI::IsMember({"table", "exact"}));
  }

  TrainingConfig config() const {
    TrainingConfig c;
    c.architecture = parse_architecture(arch);
    c.dim = dim;
    c.window = window;
    c.hs = hs != 0;
    c.negative = negative;
    c.sample = sample;
    c.epochs = epochs;
    if (alpha != 0) c.alpha = alpha;
    if (min_alpha != 0) c.min_alpha = min_alpha;
    c.min_count = min_count;
    c.threads = threads;
    c.seed = seed;
    c.sigmoid = sigmoid == "exact" ? SigmoidMode::kExact : SigmoidMode::kTable;
    c.validate();
    return c;
  }
};

fs::path vocab_sidecar(const fs::path& model) {
  fs::path p = model;
  p += ".vocab";
  return p;
}

MultiwordDictionary load_dict(const std::string& path) {
  return path.empty() ? MultiwordDictionary() : MultiwordDictionary::load(path);
}

VectorStore load_store(const std::string& model, const std::string& vocab) {
  fs::path vocab_path = vocab;
  if (vocab_path.empty() && fs::exists(vocab_sidecar(model))) {
    vocab_path = vocab_sidecar(model);
  }
  return VectorStore::load(model, vocab_path);
}

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const std::string& item : raw) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

QueryService* g_service = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

void configure_logging(bool quiet) {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = spdlog::stderr_color_mt("medvec");
    l->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    return l;
  }();
  spdlog::set_default_logger(logger);
  spdlog::set_level(quiet ? spdlog::level::off : spdlog::level::info);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"medvec: word embeddings for ontology relation assessment"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "Suppress log output");

  // preprocess
  std::string pre_input, pre_dict, pre_output;
  CLI::App* preprocess =
      app.add_subcommand("preprocess", "Normalize a corpus and merge multiword terms");
  preprocess->add_option("--input", pre_input, "Raw UTF-8 text")->required();
  preprocess->add_option("--dict", pre_dict, "Multiword terms, one per line");
  preprocess->add_option("--output", pre_output, "Preprocessed corpus")->required();

  // train
  TrainFlags train_flags;
  std::string train_input, train_output, train_vocab;
  int train_binary = 1;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a word vector model");
  train_cmd->add_option("--input", train_input, "Preprocessed corpus")->required();
  train_cmd->add_option("--output", train_output, "Model file")->required();
  train_flags.add_to(train_cmd, /*with_shape=*/true);
  train_cmd->add_option("--binary", train_binary, "Binary (1) or text (0) output")
      ->check(CLI::IsMember({0, 1}));
  train_cmd->add_option("--vocab-out", train_vocab,
                        "Vocabulary counts file (default: <output>.vocab)");

  // distance
  std::string dist_model, dist_word;
  std::size_t dist_top = kDefaultTopK;
  CLI::App* distance = app.add_subcommand("distance", "Nearest words by cosine similarity");
  distance->add_option("--model", dist_model, "Model file")->required();
  distance->add_option("--word", dist_word, "Query word")->required();
  distance->add_option("--top", dist_top, "Number of results");

  // analogy
  std::string an_model, an_a, an_b, an_c;
  std::size_t an_top = kDefaultTopK;
  CLI::App* analogy = app.add_subcommand("analogy", "Words closest to a - b + c");
  analogy->add_option("--model", an_model, "Model file")->required();
  analogy->add_option("--a", an_a, "Positive word")->required();
  analogy->add_option("--b", an_b, "Negative word")->required();
  analogy->add_option("--c", an_c, "Positive word")->required();
  analogy->add_option("--top", an_top, "Number of results");

  // evaluate
  std::string ev_model, ev_gold, ev_predicate, ev_tool = "analogy", ev_exemplar,
                                               ev_dict, ev_vocab, ev_out, ev_corpus;
  std::size_t ev_top = kDefaultTopK;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Accuracy of one tool on one gold predicate");
  evaluate->add_option("--model", ev_model, "Model file")->required();
  evaluate->add_option("--gold", ev_gold, "Gold triples (subject<TAB>predicate<TAB>object)")
      ->required();
  evaluate->add_option("--predicate", ev_predicate, "Predicate to evaluate")->required();
  evaluate->add_option("--tool", ev_tool, "distance or analogy")
      ->check(CLI::IsMember({"distance", "analogy"}));
  evaluate->add_option("--exemplar", ev_exemplar,
                       "Analogy exemplar SUBJECT:OBJECT (default: most frequent pair)");
  evaluate->add_option("--top", ev_top, "Words retrieved per subject");
  evaluate->add_option("--dict", ev_dict, "Multiword terms used for the corpus");
  evaluate->add_option("--vocab", ev_vocab, "Vocabulary counts (default: <model>.vocab)");
  evaluate->add_option("--corpus-id", ev_corpus, "Corpus label for the report");
  evaluate->add_option("--out", ev_out, "Also write the CSV report here");

  // sweep
  TrainFlags sweep_flags;
  std::string sw_corpus, sw_gold, sw_dict, sw_out, sw_corpus_id;
  std::vector<std::string> sw_arch = {"sg", "cbow"};
  std::vector<int> sw_dims = {200, 300, 500, 800};
  std::vector<int> sw_windows = {5, 10, 20};
  std::vector<std::string> sw_tools = {"analogy", "distance"};
  std::vector<std::string> sw_predicates;
  std::size_t sw_top = kDefaultTopK;
  CLI::App* sweep = app.add_subcommand("sweep", "Train and evaluate a parameter grid");
  sweep->add_option("--corpus", sw_corpus, "Preprocessed corpus")->required();
  sweep->add_option("--gold", sw_gold, "Gold triples")->required();
  sweep->add_option("--arch", sw_arch, "Architectures")
      ->delimiter(',')
      ->check(CLI::IsMember({"sg", "cbow"}));
  sweep->add_option("--dims", sw_dims, "Vector dimensionalities")->delimiter(',');
  sweep->add_option("--windows", sw_windows, "Window sizes")->delimiter(',');
  sweep->add_option("--tools", sw_tools, "Query tools")
      ->delimiter(',')
      ->check(CLI::IsMember({"distance", "analogy"}));
  sweep->add_option("--predicates", sw_predicates,
                    "Predicates (default: all in the gold file)")
      ->delimiter(',');
  sweep->add_option("--top", sw_top, "Words retrieved per subject");
  sweep->add_option("--dict", sw_dict, "Multiword terms used for the corpus");
  sweep->add_option("--corpus-id", sw_corpus_id, "Corpus label (default: file stem)");
  sweep->add_option("--out", sw_out, "CSV report")->required();
  sweep_flags.add_to(sweep, /*with_shape=*/false);

  // serve
  ServiceConfig svc;
  std::string svc_model;
  int svc_timeout = 30;
  CLI::App* serve = app.add_subcommand("serve", "Serve distance/analogy over HTTP");
  serve->add_option("--model", svc_model, "Model file")->required();
  serve->add_option("--port", svc.port, "Listening port");
  serve->add_option("--bind", svc.bind_address, "Listening address");
  serve->add_option("--top", svc.default_k, "Default number of results");
  serve->add_option("--timeout", svc_timeout, "Request timeout in seconds");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  configure_logging(quiet);

  try {
    if (*preprocess) {
      const MultiwordDictionary dict = load_dict(pre_dict);
      const CorpusStats stats = preprocess_corpus(pre_input, dict, pre_output);
      out << "word_count\t" << stats.word_count << "\nvocabulary_size\t"
          << stats.vocabulary_size << "\n";
    } else if (*train_cmd) {
      const TrainingConfig config = train_flags.config();
      TrainStats stats;
      const EmbeddingModel model = train_file(train_input, config, &stats);
      save_model(model, train_output, train_binary != 0);
      model.vocab.save_tsv(train_vocab.empty() ? vocab_sidecar(train_output)
                                               : fs::path(train_vocab));
      out << "vocabulary\t" << model.vocab.size() << "\ntokens_per_second\t"
          << static_cast<std::uint64_t>(stats.tokens_per_second()) << "\n";
    } else if (*distance) {
      const VectorStore store = VectorStore::load(dist_model);
      out << format_result_lines(store.distance(dist_word, dist_top));
    } else if (*analogy) {
      const VectorStore store = VectorStore::load(an_model);
      out << format_result_lines(store.analogy(an_a, an_b, an_c, an_top));
    } else if (*evaluate) {
      const MultiwordDictionary dict = load_dict(ev_dict);
      const GoldStandard gold = GoldStandard::load(ev_gold, dict);
      const VectorStore store = load_store(ev_model, ev_vocab);
      EvalOptions options{parse_tool(ev_tool), ev_top, std::nullopt};
      if (!ev_exemplar.empty()) options.exemplar = parse_exemplar(ev_exemplar, dict);
      ModelTag tag;
      tag.corpus = ev_corpus;
      const std::string predicate = normalize_label(ev_predicate, MultiwordDictionary());
      const EvalRow row = evaluate_relationship(store, gold, predicate, options, tag);
      write_report(out, {row});
      if (!ev_out.empty()) {
        AtomicFileWriter writer(ev_out, /*binary=*/false);
        write_report(writer.stream(), {row});
        writer.commit();
      }
    } else if (*sweep) {
      const TrainingConfig base = sweep_flags.config();
      SweepGrid grid;
      for (const std::string& a : split_list(sw_arch)) {
        grid.architectures.push_back(parse_architecture(a));
      }
      grid.windows = sw_windows;
      grid.dims = sw_dims;
      for (const std::string& t : split_list(sw_tools)) grid.tools.push_back(parse_tool(t));
      for (int w : grid.windows) {
        if (w <= 0) throw ConfigError("window sizes must be > 0");
      }
      for (int d : grid.dims) {
        if (d <= 0) throw ConfigError("dimensions must be > 0");
      }

      const MultiwordDictionary dict = load_dict(sw_dict);
      const GoldStandard gold = GoldStandard::load(sw_gold, dict);
      for (const std::string& p : split_list(sw_predicates)) {
        grid.predicates.push_back(normalize_label(p, MultiwordDictionary()));
      }
      if (sw_predicates.empty()) grid.predicates = gold.predicates();
      if (grid.size() == 0) throw ConfigError("sweep grid is empty");

      std::ifstream in = open_input(sw_corpus);
      const Vocabulary vocab = Vocabulary::build(in, base.min_count);
      in.clear();
      in.seekg(0);
      const EncodedCorpus corpus = encode_corpus(in, vocab);
      const std::string corpus_id =
          sw_corpus_id.empty() ? fs::path(sw_corpus).stem().string() : sw_corpus_id;
      const std::vector<EvalRow> rows =
          run_sweep(corpus, vocab, gold, grid, base, sw_top, corpus_id);
      AtomicFileWriter writer(sw_out, /*binary=*/false);
      write_report(writer.stream(), rows);
      writer.commit();
      std::size_t failed = 0;
      for (const EvalRow& r : rows) failed += r.failed() ? 1 : 0;
      out << "rows\t" << rows.size() << "\nfailed\t" << failed << "\n";
    } else if (*serve) {
      svc.model_path = svc_model;
      svc.request_timeout = std::chrono::seconds(svc_timeout);
      svc.validate();
      if (svc.port == 0) throw ConfigError("--port must be in 1..65535");
      QueryService service(svc);
      service.bind();
      g_service = &service;
      std::signal(SIGINT, handle_stop_signal);
      std::signal(SIGTERM, handle_stop_signal);
      std::exception_ptr load_error;
      std::thread loader([&] {
        try {
          service.load_model();
        } catch (...) {
          load_error = std::current_exception();
          service.stop();
        }
      });
      service.serve();
      loader.join();
      g_service = nullptr;
      std::signal(SIGINT, SIG_DFL);
      std::signal(SIGTERM, SIG_DFL);
      if (load_error) std::rethrow_exception(load_error);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace medvec::cli
