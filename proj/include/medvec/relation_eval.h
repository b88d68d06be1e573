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

// Scores a model against subject-predicate-object gold triples.
//
// For each unique subject of a predicate the model is queried with the
// distance tool (neighbours of the subject) or the analogy tool (subject
// shifted by the offset of one exemplar pair). A subject is a hit when any
// retrieved word is one of its gold objects; accuracy is hits over subjects
// that could be queried at all.

#ifndef MEDVEC_RELATION_EVAL_H_
#define MEDVEC_RELATION_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "medvec/text.h"
#include "medvec/trainer.h"
#include "medvec/vector_store.h"

namespace medvec {

struct RelationTriple {
  std::string subject;
  std::string predicate;
  std::string object;

  auto operator<=>(const RelationTriple&) const = default;
};

// Triples of one predicate. Subjects and pairs keep first-seen order.
struct PredicateGroup {
  std::vector<std::string> subjects;
  std::map<std::string, std::set<std::string>> objects;
  std::vector<std::pair<std::string, std::string>> pairs;

  std::size_t triple_count() const { return pairs.size(); }
};

class GoldStandard {
 public:
  // Tab-separated "subject<TAB>predicate<TAB>object" lines. Fields are
  // normalized like corpus text and multiword labels merged with `dict`.
  // Lines without exactly three fields, or whose fields normalize to nothing
  // or to subject == object, are skipped and listed in rejected_lines().
  static GoldStandard read(std::istream& in, const MultiwordDictionary& dict);
  static GoldStandard load(const std::filesystem::path& path,
                           const MultiwordDictionary& dict);

  // Returns false for duplicates and invalid triples.
  bool add(RelationTriple triple);

  std::vector<std::string> predicates() const;
  bool has_predicate(std::string_view predicate) const;
  // Throws EvaluationError for an unknown predicate.
  const PredicateGroup& group(std::string_view predicate) const;

  std::size_t triple_count() const;
  const std::vector<std::size_t>& rejected_lines() const { return rejected_; }

 private:
  std::map<std::string, PredicateGroup, std::less<>> groups_;
  std::set<RelationTriple> triples_;
  std::vector<std::size_t> rejected_;
};

enum class QueryTool { kDistance, kAnalogy };

std::string_view to_string(QueryTool tool);
QueryTool parse_tool(std::string_view name);

struct Exemplar {
  std::string subject;
  std::string object;

  bool operator==(const Exemplar&) const = default;
};

// Parses "S:O" and normalizes both sides with `dict`.
Exemplar parse_exemplar(std::string_view spec, const MultiwordDictionary& dict);

// Pair with the highest count(subject) + count(object) among pairs whose
// words are both in the store; earlier pairs win ties. Throws
// EvaluationError when no pair qualifies.
Exemplar choose_exemplar(const VectorStore& store, const PredicateGroup& group);

// Labels describing the model a row was computed from. Zero / negative
// numbers mean "unknown" and are written as empty CSV fields.
struct ModelTag {
  std::string corpus;
  std::string arch;
  int dim = 0;
  int window = 0;
  int hs = -1;
  int negative = -1;

  static ModelTag from_config(std::string corpus, const TrainingConfig& config);
  bool operator==(const ModelTag&) const = default;
};

struct EvalRow {
  ModelTag model;
  QueryTool tool = QueryTool::kDistance;
  std::string predicate;
  std::size_t k = kDefaultTopK;
  std::size_t evaluable = 0;
  std::size_t skipped = 0;
  std::size_t hits = 0;
  double accuracy = 0;
  std::string error;  // non-empty for a failed sweep cell

  bool failed() const { return !error.empty(); }
  bool operator==(const EvalRow&) const = default;
};

struct EvalOptions {
  QueryTool tool = QueryTool::kDistance;
  std::size_t k = kDefaultTopK;
  std::optional<Exemplar> exemplar;  // analogy only; chosen when unset
};

// Subjects out of vocabulary are skipped. In analogy mode the exemplar's own
// subject is skipped as well. Throws EvaluationError when nothing is
// evaluable or, in analogy mode, when no exemplar is available.
EvalRow evaluate_relationship(const VectorStore& store, const GoldStandard& gold,
                              std::string_view predicate,
                              const EvalOptions& options,
                              const ModelTag& tag = {});

// Both tools for every predicate: tools outer, predicates inner.
std::vector<EvalRow> compare_tools(const VectorStore& store,
                                   const GoldStandard& gold,
                                   const std::vector<std::string>& predicates,
                                   std::size_t k, const ModelTag& tag = {});

struct SweepGrid {
  std::vector<Architecture> architectures;
  std::vector<int> windows;
  std::vector<int> dims;
  std::vector<QueryTool> tools;
  std::vector<std::string> predicates;

  std::size_t size() const {
    return architectures.size() * windows.size() * dims.size() * tools.size() *
           predicates.size();
  }
};

// Trains one model per (architecture, window, dim) cell from `base` and
// evaluates it for every (tool, predicate). Rows are ordered architecture,
// window, dim, tool, predicate. A failing cell produces failed rows and the
// sweep carries on.
std::vector<EvalRow> run_sweep(const EncodedCorpus& corpus, const Vocabulary& vocab,
                               const GoldStandard& gold, const SweepGrid& grid,
                               const TrainingConfig& base, std::size_t k,
                               const std::string& corpus_id);

inline constexpr std::string_view kReportHeader =
    "corpus,tool,predicate,arch,dim,window,hs,negative,k,evaluable,skipped,hits,"
    "accuracy";

// One CSV line without the trailing newline. Accuracy has four decimals;
// failed rows leave the count and accuracy fields empty.
std::string format_report_row(const EvalRow& row);
void write_report(std::ostream& out, const std::vector<EvalRow>& rows);

}  // namespace medvec

#endif  // MEDVEC_RELATION_EVAL_H_
