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

#include <random>
#include <sstream>

#include <doctest.h>

#include "medvec/error.h"
#include "medvec/text.h"
#include "support/temp_dir.h"

using medvec::CorpusStats;
using medvec::MultiwordDictionary;
using medvec::TokenStream;

namespace {

MultiwordDictionary dict_of(std::initializer_list<const char*> terms) {
  MultiwordDictionary d;
  for (const char* t : terms) d.add(t);
  return d;
}

std::string preprocess_string(const std::string& raw, const MultiwordDictionary& dict,
                              CorpusStats* stats = nullptr) {
  std::istringstream in(raw);
  std::ostringstream out;
  const CorpusStats s = medvec::preprocess_corpus(in, dict, out);
  if (stats != nullptr) *stats = s;
  return out.str();
}

TokenStream split_ws(const std::string& text) {
  std::istringstream in(text);
  TokenStream out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

bool plain_token(const std::string& t) {
  if (t.empty()) return false;
  auto inner = [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); };
  if (!inner(t.front()) || !inner(t.back())) return false;
  for (char c : t) {
    if (!inner(c) && c != '-') return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("corpus_pipeline") {

TEST_CASE("normalize_text strips punctuation and folds case") {
  CHECK(medvec::normalize_text("diabetes.") == TokenStream{"diabetes"});
  CHECK(medvec::normalize_text("Diabetes, DIABETES diabetes") ==
        TokenStream{"diabetes", "diabetes", "diabetes"});
  CHECK(medvec::normalize_text("").empty());
  CHECK(medvec::normalize_text("[coumadin] aspirin's") ==
        TokenStream{"coumadin", "aspirin", "s"});
}

TEST_CASE("normalize_text keeps digits and internal hyphens") {
  CHECK(medvec::normalize_text("Non-Small-Cell lung cancer, 100mg")
        == TokenStream{"non-small-cell", "lung", "cancer", "100mg"});
  CHECK(medvec::normalize_text("--x-- -- -y") == TokenStream{"x", "y"});
  CHECK(medvec::normalize_text("  a \t\n b  ") == TokenStream{"a", "b"});
}

TEST_CASE("normalize_text lowercases non-ASCII letters") {
  CHECK(medvec::normalize_text("Ménière's DISEASE") ==
        TokenStream{"ménière", "s", "disease"});
  CHECK(medvec::normalize_text("ÄRZTE—Übersicht") == TokenStream{"ärzte", "übersicht"});
}

TEST_CASE("invalid UTF-8 reports the byte offset") {
  const std::string bad = std::string("abc ") + '\xC3' + "(";
  try {
    medvec::normalize_text(bad);
    FAIL("expected DecodeError");
  } catch (const medvec::DecodeError& e) {
    CHECK(e.byte_offset() == 4);
  }
  CHECK_THROWS_AS(medvec::normalize_text("\xED\xA0\x80"), medvec::DecodeError);  // surrogate
  CHECK_THROWS_AS(medvec::normalize_text("\xC0\xAF"), medvec::DecodeError);      // overlong

  std::istringstream in("ok line\nsecond \xFF line\n");
  std::ostringstream out;
  try {
    medvec::preprocess_corpus(in, MultiwordDictionary(), out);
    FAIL("expected DecodeError");
  } catch (const medvec::DecodeError& e) {
    CHECK(e.byte_offset() == 15);
  }
}

TEST_CASE("dictionary loading normalizes and filters terms") {
  MultiwordDictionary d = dict_of({"Glucose Metabolism Disorder"});
  CHECK(d.contains("glucose metabolism disorder"));
  CHECK(d.size() == 1);
  CHECK(d.max_phrase_len() == 3);

  CHECK(dict_of({"aspirin"}).empty());
  CHECK(dict_of({"Heart Attack", "heart attack."}).size() == 1);

  std::istringstream in("Heart Attack\n\naspirin\nheart   attack.\nAcute Renal Failure\n");
  MultiwordDictionary loaded = MultiwordDictionary::from_stream(in);
  CHECK(loaded.size() == 2);
  for (const std::string& p : loaded.phrases()) {
    CHECK(split_ws(p).size() >= 2);
    for (const std::string& t : split_ws(p)) CHECK(plain_token(t));
  }
}

TEST_CASE("missing dictionary file is an input error") {
  CHECK_THROWS_AS(MultiwordDictionary::load("/nonexistent/dict.txt"), medvec::InputError);
}

TEST_CASE("merge_multiwords uses greedy longest match") {
  CHECK(medvec::merge_multiwords(TokenStream{"glucose", "metabolism", "disorder"},
                                 dict_of({"glucose metabolism disorder"})) ==
        TokenStream{"glucose_metabolism_disorder"});
  const TokenStream any{"x", "y", "z"};
  CHECK(medvec::merge_multiwords(any, MultiwordDictionary()) == any);
  CHECK(medvec::merge_multiwords(TokenStream{"a", "b", "c"}, dict_of({"a b", "a b c"})) ==
        TokenStream{"a_b_c"});
  CHECK(medvec::merge_multiwords(TokenStream{"a", "b", "d", "a", "b", "c", "a"},
                                 dict_of({"a b", "a b c"})) ==
        TokenStream{"a_b", "d", "a_b_c", "a"});
  // Left-to-right: "b c" is not reachable once "a b" has consumed b.
  CHECK(medvec::merge_multiwords(TokenStream{"a", "b", "c"}, dict_of({"a b", "b c"})) ==
        TokenStream{"a_b", "c"});
}

TEST_CASE("phrases do not span lines") {
  const std::string out =
      preprocess_string("Glucose\nMetabolism Disorder\n", dict_of({"glucose metabolism disorder",
                                                                    "metabolism disorder"}));
  CHECK(out == "glucose\nmetabolism_disorder\n");
}

TEST_CASE("preprocess_corpus statistics") {
  CorpusStats s;
  CHECK(preprocess_string("Diabetes.\nDiabetes.\nDiabetes.\n", MultiwordDictionary(), &s) ==
        "diabetes\ndiabetes\ndiabetes\n");
  CHECK(s == CorpusStats{3, 1});
  preprocess_string("", MultiwordDictionary(), &s);
  CHECK(s == CorpusStats{0, 0});
}

TEST_CASE("planted multiword phrases shrink the word count by construction") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 49);
  const std::vector<std::string> phrase{"glucose", "metabolism", "disorder"};
  std::vector<std::string> tokens;
  int planted = 0;
  while (tokens.size() < 1000) {
    if (planted < 10 && tokens.size() % 40 == 3) {
      tokens.insert(tokens.end(), phrase.begin(), phrase.end());
      ++planted;
    } else {
      tokens.push_back("t" + std::to_string(pick(rng)));
    }
  }
  REQUIRE(planted == 10);
  REQUIRE(tokens.size() == 1000);
  std::string raw;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    raw += tokens[i];
    raw += (i % 20 == 19) ? '\n' : ' ';
  }
  // Phrases must not straddle a line break for the count to hold.
  for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
    if (tokens[i] == "glucose") REQUIRE(i / 20 == (i + 2) / 20);
  }
  CorpusStats s;
  const std::string out = preprocess_string(raw, dict_of({"glucose metabolism disorder"}), &s);
  CHECK(s.word_count == 1000 - 10 * (3 - 1));
  CHECK(split_ws(out).size() == s.word_count);
}

TEST_CASE("normalize_label joins merged tokens") {
  const MultiwordDictionary d = dict_of({"acetylsalicylic acid"});
  CHECK(medvec::normalize_label("Acetylsalicylic Acid", d) == "acetylsalicylic_acid");
  CHECK(medvec::normalize_label("Type 2 Diabetes", d) == "type_2_diabetes");
  CHECK(medvec::normalize_label("may_treat", d) == "may_treat");
}

TEST_CASE("preprocess_corpus file overload writes atomically") {
  medvec::testing::TempDir dir;
  const auto in = dir.write("raw.txt", "Heart Attack.\n");
  const auto out = dir.path() / "clean.txt";
  const CorpusStats s =
      medvec::preprocess_corpus(in, dict_of({"heart attack"}), out);
  CHECK(s == CorpusStats{1, 1});
  CHECK(dir.read("clean.txt") == "heart_attack\n");
  CHECK_THROWS_AS(medvec::preprocess_corpus(dir.path() / "missing.txt",
                                            MultiwordDictionary(), dir.path() / "o.txt"),
                  medvec::InputError);
  CHECK_FALSE(std::filesystem::exists(dir.path() / "o.txt"));
}

TEST_CASE("preprocessing is idempotent and yields well-formed tokens (fuzz)") {
  std::mt19937_64 rng(2026);
  const std::vector<std::string> atoms = {
      "Glucose", "metabolism", "DISORDER", "heart", "Attack", "aspirin's", "[coumadin]",
      "non-small-cell", "-lead", "trail-", "100mg", "é", "Ü", "ß", ".", ",", ";", "(",
      ")", "\"", "'", "_", "__x__", "a_b", "-", "--", " ", "  ", "\t", "\n", "\r\n",
      "ménière", "x", "y", "z", "a", "b", "c", "日本", "™", "€"};
  const MultiwordDictionary dict =
      dict_of({"glucose metabolism disorder", "heart attack", "a b", "a b c", "x y",
               "metabolism disorder"});
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  std::uniform_int_distribution<int> length(0, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string raw;
    const int n = length(rng);
    for (int i = 0; i < n; ++i) {
      raw += atoms[pick(rng)];
      if (rng() % 2) raw += ' ';
    }
    const std::string once = preprocess_string(raw, dict);
    const std::string twice = preprocess_string(once, dict);
    REQUIRE_MESSAGE(once == twice, "input: " << raw);
    CorpusStats s;
    preprocess_string(raw, dict, &s);
    CHECK(split_ws(once).size() == s.word_count);
    // Every output token is a plain token or dictionary-joined plain tokens.
    for (const std::string& tok : split_ws(once)) {
      CHECK(tok.front() != '_');
      CHECK(tok.back() != '_');
      CHECK(tok.front() != '-');
      CHECK(tok.back() != '-');
    }
  }
}

TEST_CASE("merge output tokens come from the input") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> words{"a", "b", "c", "d"};
  const MultiwordDictionary dict = dict_of({"a b", "b c d", "a b c", "d d"});
  for (int trial = 0; trial < 200; ++trial) {
    TokenStream in;
    for (int i = 0; i < 12; ++i) in.push_back(words[rng() % words.size()]);
    const TokenStream out = medvec::merge_multiwords(in, dict);
    CHECK(out.size() <= in.size());
    // Splitting merged tokens at "_" restores the input exactly.
    TokenStream restored;
    for (const std::string& t : out) {
      std::size_t start = 0;
      while (true) {
        const std::size_t pos = t.find('_', start);
        restored.push_back(t.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
      }
    }
    CHECK(restored == in);
  }
}

}  // TEST_SUITE
