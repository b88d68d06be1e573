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

#include "medvec/relation_eval.h"

#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "medvec/error.h"
#include "medvec/io.h"

namespace medvec {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string known(int value, int unknown_below) {
  return value < unknown_below ? std::string() : std::to_string(value);
}

bool any_hit(const QueryResult& result, const std::set<std::string>& objects) {
  for (const Neighbor& n : result) {
    if (objects.count(n.word) > 0) return true;
  }
  return false;
}

EvalRow failed_row(const ModelTag& tag, QueryTool tool, const std::string& predicate,
                   std::size_t k, std::string error) {
  EvalRow row;
  row.model = tag;
  row.tool = tool;
  row.predicate = predicate;
  row.k = k;
  row.error = error.empty() ? "unknown error" : std::move(error);
  return row;
}

}  // namespace

bool GoldStandard::add(RelationTriple triple) {
  if (triple.subject.empty() || triple.predicate.empty() ||
      triple.object.empty() || triple.subject == triple.object) {
    return false;
  }
  if (!triples_.insert(triple).second) return false;
  PredicateGroup& g = groups_[triple.predicate];
  auto [it, inserted] = g.objects.try_emplace(triple.subject);
  if (inserted) g.subjects.push_back(triple.subject);
  it->second.insert(triple.object);
  g.pairs.emplace_back(std::move(triple.subject), std::move(triple.object));
  return true;
}

GoldStandard GoldStandard::read(std::istream& in, const MultiwordDictionary& dict) {
  GoldStandard gold;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::vector<std::string_view> fields = split_tabs(line);
    if (fields.size() != 3) {
      gold.rejected_.push_back(line_no);
      continue;
    }
    RelationTriple t;
    try {
      t = {normalize_label(fields[0], dict), normalize_label(fields[1], dict),
           normalize_label(fields[2], dict)};
    } catch (const DecodeError& e) {
      throw DecodeError("gold standard line " + std::to_string(line_no) +
                            ": invalid UTF-8",
                        line_offset + e.byte_offset());
    }
    if (t.subject.empty() || t.predicate.empty() || t.object.empty() ||
        t.subject == t.object) {
      gold.rejected_.push_back(line_no);
      continue;
    }
    gold.add(std::move(t));
  }
  if (in.bad()) throw InputError("failed reading gold standard");
  if (!gold.rejected_.empty()) {
    std::string lines;
    for (std::size_t i = 0; i < gold.rejected_.size() && i < 20; ++i) {
      lines += (i ? "," : "") + std::to_string(gold.rejected_[i]);
    }
    spdlog::warn("gold standard: rejected {} malformed line(s): {}{}",
                 gold.rejected_.size(), lines,
                 gold.rejected_.size() > 20 ? ",..." : "");
  }
  if (gold.triples_.empty()) throw EvaluationError("gold standard has no triples");
  return gold;
}

GoldStandard GoldStandard::load(const std::filesystem::path& path,
                                const MultiwordDictionary& dict) {
  std::ifstream in = open_input(path);
  try {
    return read(in, dict);
  } catch (const EvaluationError& e) {
    throw EvaluationError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> GoldStandard::predicates() const {
  std::vector<std::string> out;
  for (const auto& [name, group] : groups_) out.push_back(name);
  return out;
}

bool GoldStandard::has_predicate(std::string_view predicate) const {
  return groups_.find(predicate) != groups_.end();
}

const PredicateGroup& GoldStandard::group(std::string_view predicate) const {
  auto it = groups_.find(predicate);
  if (it == groups_.end()) {
    throw EvaluationError("predicate '" + std::string(predicate) +
                          "' not found in gold standard");
  }
  return it->second;
}

std::size_t GoldStandard::triple_count() const { return triples_.size(); }

std::string_view to_string(QueryTool tool) {
  return tool == QueryTool::kDistance ? "distance" : "analogy";
}

QueryTool parse_tool(std::string_view name) {
  if (name == "distance") return QueryTool::kDistance;
  if (name == "analogy") return QueryTool::kAnalogy;
  throw ConfigError("unknown tool '" + std::string(name) +
                    "' (expected distance or analogy)");
}

Exemplar parse_exemplar(std::string_view spec, const MultiwordDictionary& dict) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("exemplar must look like SUBJECT:OBJECT");
  }
  Exemplar e{normalize_label(spec.substr(0, colon), dict),
             normalize_label(spec.substr(colon + 1), dict)};
  if (e.subject.empty() || e.object.empty()) {
    throw ConfigError("exemplar must look like SUBJECT:OBJECT");
  }
  return e;
}

Exemplar choose_exemplar(const VectorStore& store, const PredicateGroup& group) {
  const std::pair<std::string, std::string>* best = nullptr;
  std::int64_t best_score = -1;
  for (const auto& pair : group.pairs) {
    const std::int32_t s = store.index_of(pair.first);
    const std::int32_t o = store.index_of(pair.second);
    if (s < 0 || o < 0) continue;
    const std::int64_t score = store.count(static_cast<std::size_t>(s)) +
                               store.count(static_cast<std::size_t>(o));
    if (score > best_score) {
      best_score = score;
      best = &pair;
    }
  }
  if (best == nullptr) {
    throw EvaluationError("no exemplar pair with both words in the vocabulary");
  }
  return {best->first, best->second};
}

ModelTag ModelTag::from_config(std::string corpus, const TrainingConfig& config) {
  return {std::move(corpus), std::string(to_string(config.architecture)),
          config.dim, config.window, config.hs ? 1 : 0, config.negative};
}

EvalRow evaluate_relationship(const VectorStore& store, const GoldStandard& gold,
                              std::string_view predicate,
                              const EvalOptions& options, const ModelTag& tag) {
  const PredicateGroup& group = gold.group(predicate);
  EvalRow row;
  row.model = tag;
  if (row.model.dim <= 0) row.model.dim = static_cast<int>(store.dim());
  row.tool = options.tool;
  row.predicate = std::string(predicate);
  row.k = options.k;

  Exemplar exemplar;
  if (options.tool == QueryTool::kAnalogy) {
    if (options.exemplar) {
      exemplar = *options.exemplar;
      std::vector<std::string> missing;
      if (!store.contains(exemplar.subject)) missing.push_back(exemplar.subject);
      if (!store.contains(exemplar.object)) missing.push_back(exemplar.object);
      if (!missing.empty()) {
        throw EvaluationError(std::string("exemplar not in vocabulary: ") +
                              NotFoundError(missing).what());
      }
    } else {
      exemplar = choose_exemplar(store, group);
    }
    spdlog::debug("{}: exemplar {} -> {}", predicate, exemplar.subject,
                  exemplar.object);
  }

  for (const std::string& subject : group.subjects) {
    const bool usable = store.contains(subject) &&
                        !(options.tool == QueryTool::kAnalogy &&
                          subject == exemplar.subject);
    if (!usable) {
      ++row.skipped;
      continue;
    }
    ++row.evaluable;
    if (options.k == 0) continue;
    const QueryResult result =
        options.tool == QueryTool::kDistance
            ? store.distance(subject, options.k)
            : store.analogy(exemplar.object, exemplar.subject, subject, options.k);
    if (any_hit(result, group.objects.at(subject))) ++row.hits;
  }
  if (row.evaluable == 0) {
    throw EvaluationError("no evaluable subjects for predicate '" +
                          std::string(predicate) + "'");
  }
  row.accuracy = static_cast<double>(row.hits) / static_cast<double>(row.evaluable);
  return row;
}

std::vector<EvalRow> compare_tools(const VectorStore& store,
                                   const GoldStandard& gold,
                                   const std::vector<std::string>& predicates,
                                   std::size_t k, const ModelTag& tag) {
  std::vector<EvalRow> rows;
  for (QueryTool tool : {QueryTool::kAnalogy, QueryTool::kDistance}) {
    for (const std::string& p : predicates) {
      rows.push_back(evaluate_relationship(store, gold, p, {tool, k, std::nullopt}, tag));
    }
  }
  return rows;
}

std::vector<EvalRow> run_sweep(const EncodedCorpus& corpus, const Vocabulary& vocab,
                               const GoldStandard& gold, const SweepGrid& grid,
                               const TrainingConfig& base, std::size_t k,
                               const std::string& corpus_id) {
  if (grid.size() == 0) {
    throw ConfigError("sweep grid is empty: every axis needs at least one value");
  }
  std::vector<EvalRow> rows;
  rows.reserve(grid.size());
  for (Architecture arch : grid.architectures) {
    for (int window : grid.windows) {
      for (int dim : grid.dims) {
        TrainingConfig config = base;
        config.architecture = arch;
        config.window = window;
        config.dim = dim;
        const ModelTag tag = ModelTag::from_config(corpus_id, config);

        std::optional<VectorStore> store;
        std::string cell_error;
        try {
          spdlog::info("sweep: training {} window={} dim={}", to_string(arch),
                       window, dim);
          store.emplace(VectorStore::from_model(train(corpus, vocab, config)));
        } catch (const std::exception& e) {
          cell_error = e.what();
          spdlog::error("sweep: cell {} window={} dim={} failed: {}",
                        to_string(arch), window, dim, cell_error);
        }

        for (QueryTool tool : grid.tools) {
          for (const std::string& predicate : grid.predicates) {
            if (store) {
              try {
                rows.push_back(evaluate_relationship(
                    *store, gold, predicate, {tool, k, std::nullopt}, tag));
                continue;
              } catch (const std::exception& e) {
                rows.push_back(failed_row(tag, tool, predicate, k, e.what()));
                continue;
              }
            }
            rows.push_back(failed_row(tag, tool, predicate, k, cell_error));
          }
        }
      }
    }
  }
  return rows;
}

std::string format_report_row(const EvalRow& row) {
  const ModelTag& m = row.model;
  std::string line = fmt::format(
      "{},{},{},{},{},{},{},{},{},", csv_field(m.corpus), to_string(row.tool),
      csv_field(row.predicate), csv_field(m.arch), known(m.dim, 1),
      known(m.window, 1), known(m.hs, 0), known(m.negative, 0), row.k);
  if (row.failed()) {
    line += ",,,";
  } else {
    line += fmt::format("{},{},{},{:.4f}", row.evaluable, row.skipped, row.hits,
                        row.accuracy);
  }
  return line;
}

void write_report(std::ostream& out, const std::vector<EvalRow>& rows) {
  out << kReportHeader << '\n';
  for (const EvalRow& row : rows) out << format_report_row(row) << '\n';
}

}  // namespace medvec
