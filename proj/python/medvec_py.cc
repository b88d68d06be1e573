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

#include <filesystem>
#include <optional>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "medvec/error.h"
#include "medvec/model_io.h"
#include "medvec/relation_eval.h"
#include "medvec/text.h"
#include "medvec/trainer.h"
#include "medvec/vector_store.h"

namespace py = pybind11;
namespace fs = std::filesystem;

namespace {

using namespace medvec;

MultiwordDictionary load_dict(const std::optional<fs::path>& path) {
  return path ? MultiwordDictionary::load(*path) : MultiwordDictionary{};
}

std::vector<std::pair<std::string, double>> to_pairs(const QueryResult& result) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(result.size());
  for (const Neighbor& n : result) out.emplace_back(n.word, n.similarity);
  return out;
}

VectorStore load_store(const fs::path& model) {
  fs::path vocab = model;
  vocab += ".vocab";
  return VectorStore::load(model, fs::exists(vocab) ? vocab : fs::path{});
}

py::dict preprocess_file(const fs::path& input, const fs::path& output,
                    const std::optional<fs::path>& dict) {
  CorpusStats stats;
  {
    py::gil_scoped_release release;
    stats = preprocess_corpus(input, load_dict(dict), output);
  }
  py::dict out;
  out["word_count"] = stats.word_count;
  out["vocabulary_size"] = stats.vocabulary_size;
  return out;
}

py::dict train_file_to(const fs::path& corpus, const fs::path& output, const std::string& arch,
               int dim, int window, bool hs, int negative, double sample, int epochs,
               int min_count, int threads, std::uint64_t seed, bool binary) {
  TrainingConfig cfg;
  cfg.architecture = parse_architecture(arch);
  cfg.dim = dim;
  cfg.window = window;
  cfg.hs = hs;
  cfg.negative = negative;
  cfg.sample = sample;
  cfg.epochs = epochs;
  cfg.min_count = min_count;
  cfg.threads = threads;
  cfg.seed = seed;
  cfg.validate();
  TrainStats stats;
  std::size_t vocab_size = 0;
  {
    py::gil_scoped_release release;
    const EmbeddingModel model = train_file(corpus, cfg, &stats);
    save_model(model, output, binary);
    fs::path vocab = output;
    vocab += ".vocab";
    model.vocab.save_tsv(vocab);
    vocab_size = model.vocab.size();
  }
  py::dict out;
  out["vocabulary"] = vocab_size;
  out["tokens_processed"] = stats.tokens_processed;
  out["tokens_per_second"] = stats.tokens_per_second();
  out["seconds"] = stats.seconds;
  return out;
}

py::dict row_to_dict(const EvalRow& row) {
  py::dict out;
  out["predicate"] = row.predicate;
  out["tool"] = std::string(to_string(row.tool));
  out["k"] = row.k;
  out["evaluable"] = row.evaluable;
  out["skipped"] = row.skipped;
  out["hits"] = row.hits;
  out["accuracy"] = row.accuracy;
  return out;
}

py::dict evaluate_file(const fs::path& model, const fs::path& gold, const std::string& predicate,
                  const std::string& tool, std::size_t top, const std::optional<fs::path>& dict,
                  const std::optional<std::string>& exemplar) {
  const MultiwordDictionary d = load_dict(dict);
  const VectorStore store = load_store(model);
  const GoldStandard g = GoldStandard::load(gold, d);
  EvalOptions options{parse_tool(tool), top, std::nullopt};
  if (exemplar) options.exemplar = parse_exemplar(*exemplar, d);
  return row_to_dict(evaluate_relationship(store, g, predicate, options));
}

}  // namespace

PYBIND11_MODULE(_medvec, m) {
  m.doc() = "Word vector training and relation evaluation";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "MedvecError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_KeyError);

  m.attr("DEFAULT_TOP") = kDefaultTopK;

  m.def("normalize_text", [](std::string_view raw) { return normalize_text(raw); },
        py::arg("raw"));
  m.def("preprocess", &preprocess_file, py::arg("input"), py::arg("output"),
        py::arg("dict") = py::none(),
        "Normalize a corpus file and merge dictionary phrases.");
  m.def("train", &train_file_to, py::arg("corpus"), py::arg("output"), py::kw_only(),
        py::arg("arch") = "sg", py::arg("dim") = 200, py::arg("window") = 5,
        py::arg("hs") = true, py::arg("negative") = 0, py::arg("sample") = 1e-3,
        py::arg("epochs") = 5, py::arg("min_count") = 5, py::arg("threads") = 1,
        py::arg("seed") = 1, py::arg("binary") = true,
        "Train on a preprocessed corpus and write the model, weights and vocabulary.");
  m.def("evaluate", &evaluate_file, py::arg("model"), py::arg("gold"), py::arg("predicate"),
        py::kw_only(), py::arg("tool") = "analogy", py::arg("top") = kDefaultTopK,
        py::arg("dict") = py::none(), py::arg("exemplar") = py::none());

  py::class_<VectorStore>(m, "Model")
      .def_static("load", &load_store, py::arg("path"))
      .def("distance",
           [](const VectorStore& s, const std::string& word, std::size_t top) {
             return to_pairs(s.distance(word, top));
           },
           py::arg("word"), py::arg("top") = kDefaultTopK)
      .def("analogy",
           [](const VectorStore& s, const std::string& a, const std::string& b,
              const std::string& c, std::size_t top) {
             return to_pairs(s.analogy(a, b, c, top));
           },
           py::arg("a"), py::arg("b"), py::arg("c"), py::arg("top") = kDefaultTopK)
      .def("__contains__",
           [](const VectorStore& s, const std::string& w) { return s.index_of(w) >= 0; })
      .def("__len__", &VectorStore::size)
      .def_property_readonly("dim", &VectorStore::dim);
}
