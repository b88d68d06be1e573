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

#include "medvec/model_io.h"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <unordered_set>

#include "medvec/error.h"
#include "medvec/io.h"

namespace medvec {
namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

void put_float_le(float value, std::string& out) {
  auto bits = std::bit_cast<std::uint32_t>(value);
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>(bits & 0xFF));
    bits >>= 8;
  }
}

float get_float_le(const char* p) {
  std::uint32_t bits = 0;
  for (int i = 3; i >= 0; --i) {
    bits = (bits << 8) | static_cast<unsigned char>(p[i]);
  }
  return std::bit_cast<float>(bits);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

class Parser {
 public:
  explicit Parser(std::string_view bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ >= bytes_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(what, pos_);
  }

  std::size_t read_count(char terminator) {
    std::size_t value = 0;
    const char* first = bytes_.data() + pos_;
    const char* last = bytes_.data() + bytes_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) fail("malformed header");
    pos_ += static_cast<std::size_t>(ptr - first);
    expect(terminator, "malformed header");
    return value;
  }

  void expect(char c, const char* what) {
    if (done() || bytes_[pos_] != c) fail(what);
    ++pos_;
  }

  std::string read_word() {
    const std::size_t start = pos_;
    while (!done() && bytes_[pos_] != ' ') {
      if (bytes_[pos_] == '\n') fail("malformed record: word without vector");
      ++pos_;
    }
    if (done()) {
      pos_ = start;
      fail("truncated record");
    }
    if (pos_ == start) fail("malformed record: empty word");
    std::string word(bytes_.substr(start, pos_ - start));
    ++pos_;  // the separating space
    return word;
  }

  void read_binary_floats(std::span<float> out) {
    const std::size_t need = out.size() * 4;
    if (bytes_.size() - pos_ < need) fail("truncated record");
    for (float& v : out) {
      v = get_float_le(bytes_.data() + pos_);
      pos_ += 4;
    }
  }

  void read_text_floats(std::span<float> out) {
    const char* last = bytes_.data() + bytes_.size();
    for (float& v : out) {
      while (!done() && is_space(bytes_[pos_])) ++pos_;
      if (done()) fail("truncated record");
      if (bytes_[pos_] == '\n') fail("truncated record: too few values");
      const char* first = bytes_.data() + pos_;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || ptr == first) fail("malformed float value");
      pos_ += static_cast<std::size_t>(ptr - first);
    }
    while (!done() && is_space(bytes_[pos_])) ++pos_;
  }

  std::string_view rest_of_line() const {
    const std::size_t nl = bytes_.find('\n', pos_);
    return bytes_.substr(pos_, nl == std::string_view::npos ? std::string_view::npos
                                                            : nl - pos_);
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

// A text record is a line of exactly dim+1 fields whose last dim parse as
// floats. Binary records almost never satisfy that.
bool looks_like_text(std::string_view line, std::size_t dim) {
  std::size_t fields = 0;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (fields > 0) {
      float v;
      auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + i, v);
      if (ec != std::errc{} || ptr != line.data() + i) return false;
    }
    ++fields;
  }
  return fields == dim + 1;
}

void check_word(const std::string& word) {
  if (word.empty()) throw Error("cannot save an empty word");
  for (char c : word) {
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
      throw Error("cannot save word containing whitespace: '" + word + "'");
    }
  }
}

}  // namespace

std::string encode_vectors(std::span<const std::string> words,
                           const DenseMatrix<float>& vectors, bool binary) {
  if (words.size() != vectors.rows()) {
    throw Error("word count does not match vector rows");
  }
  std::string out = std::to_string(vectors.rows()) + " " +
                    std::to_string(vectors.cols()) + "\n";
  out.reserve(out.size() + vectors.rows() * (vectors.cols() * (binary ? 4 : 12) + 16));
  char buf[64];
  for (std::size_t r = 0; r < vectors.rows(); ++r) {
    check_word(words[r]);
    out += words[r];
    if (binary) {
      out.push_back(' ');
      for (float v : vectors.row(r)) put_float_le(v, out);
    } else {
      for (float v : vectors.row(r)) {
        out.push_back(' ');
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        out.append(buf, ptr);
      }
    }
    out.push_back('\n');
  }
  return out;
}

WordVectors decode_vectors(std::string_view bytes, VectorFormat format) {
  Parser p(bytes);
  const std::size_t rows = p.read_count(' ');
  const std::size_t dim = p.read_count('\n');
  if (dim == 0) throw FormatError("malformed header: dimension is zero", 0);
  // Every stored value takes at least one byte.
  if (dim > bytes.size() || rows > bytes.size() / dim) {
    throw FormatError("malformed header: sizes exceed file length", 0);
  }

  if (format == VectorFormat::kAuto) {
    format = rows > 0 && looks_like_text(p.rest_of_line(), dim)
                 ? VectorFormat::kText
                 : VectorFormat::kBinary;
  }

  WordVectors out;
  out.words.reserve(rows);
  out.vectors = DenseMatrix<float>(rows, dim);
  std::unordered_set<std::string> seen;
  seen.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t record_start = p.pos();
    std::string word = p.read_word();
    if (format == VectorFormat::kBinary) {
      p.read_binary_floats(out.vectors.row(r));
    } else {
      p.read_text_floats(out.vectors.row(r));
    }
    p.expect('\n', "malformed record: expected end of line");
    if (!seen.insert(word).second) {
      throw FormatError("duplicate word '" + word + "'", record_start);
    }
    out.words.push_back(std::move(word));
  }
  if (!p.done()) p.fail("unexpected data after last record");
  return out;
}

void save_vectors(const std::filesystem::path& path,
                  std::span<const std::string> words,
                  const DenseMatrix<float>& vectors, bool binary) {
  const std::string bytes = encode_vectors(words, vectors, binary);
  AtomicFileWriter writer(path);
  writer.stream().write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  writer.commit();
}

WordVectors load_vectors(const std::filesystem::path& path, VectorFormat format) {
  const std::string bytes = read_file(path);
  try {
    return decode_vectors(bytes, format);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what(), e.byte_offset());
  }
}

std::filesystem::path weights_path(const std::filesystem::path& model_path) {
  std::filesystem::path p = model_path;
  p += ".weights";
  return p;
}

void save_model(const EmbeddingModel& model, const std::filesystem::path& path,
                bool binary) {
  std::vector<std::string> words;
  words.reserve(model.vocab.size());
  for (const VocabEntry& e : model.vocab.entries()) words.push_back(e.word);

  const ModelParams<float>& params = model.params;
  const std::size_t dim = params.input.cols();
  const std::size_t rows = params.hs_weights.rows() + params.ns_weights.rows();
  std::string weights;
  if (rows > 0) {
    DenseMatrix<float> stacked(rows, dim);
    std::vector<std::string> names;
    names.reserve(rows);
    std::size_t r = 0;
    for (std::size_t i = 0; i < params.hs_weights.rows(); ++i, ++r) {
      names.push_back("hs:" + std::to_string(i));
      std::copy_n(params.hs_weights.row(i).data(), dim, stacked.row(r).data());
    }
    for (std::size_t i = 0; i < params.ns_weights.rows(); ++i, ++r) {
      names.push_back("ns:" + std::to_string(i));
      std::copy_n(params.ns_weights.row(i).data(), dim, stacked.row(r).data());
    }
    weights = encode_vectors(names, stacked, binary);
  }
  const std::string vectors = encode_vectors(words, params.input, binary);

  // Both files are renamed into place only after both are fully written.
  AtomicFileWriter vec_writer(path);
  vec_writer.stream().write(vectors.data(),
                            static_cast<std::streamsize>(vectors.size()));
  if (rows > 0) {
    AtomicFileWriter weight_writer(weights_path(path));
    weight_writer.stream().write(weights.data(),
                                 static_cast<std::streamsize>(weights.size()));
    weight_writer.commit();
  }
  vec_writer.commit();
}

EmbeddingModel load_model(const std::filesystem::path& path,
                          VectorFormat format) {
  WordVectors wv = load_vectors(path, format);
  std::vector<VocabEntry> entries;
  entries.reserve(wv.words.size());
  for (std::string& w : wv.words) entries.push_back({std::move(w), 0});
  EmbeddingModel model;
  model.vocab = Vocabulary(std::move(entries));
  model.config.dim = static_cast<int>(wv.vectors.cols());
  model.params.input = std::move(wv.vectors);
  return model;
}

void load_weights(const std::filesystem::path& model_path, EmbeddingModel& model) {
  const std::filesystem::path path = weights_path(model_path);
  WordVectors wv = load_vectors(path);
  const std::size_t dim = model.params.input.cols();
  if (wv.vectors.cols() != dim) {
    throw FormatError(path.string() + ": dimension does not match model", 0);
  }
  std::size_t hs_rows = 0;
  std::size_t ns_rows = 0;
  for (const std::string& name : wv.words) {
    if (name.rfind("hs:", 0) == 0) {
      ++hs_rows;
    } else if (name.rfind("ns:", 0) == 0) {
      ++ns_rows;
    } else {
      throw FormatError(path.string() + ": unexpected row '" + name + "'", 0);
    }
  }
  if (ns_rows != 0 && ns_rows != model.vocab.size()) {
    throw FormatError(path.string() + ": ns rows do not match vocabulary", 0);
  }
  model.params.hs_weights = DenseMatrix<float>(hs_rows, dim);
  model.params.ns_weights = DenseMatrix<float>(ns_rows, dim);
  std::size_t h = 0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < wv.words.size(); ++r) {
    std::span<float> dst = wv.words[r][0] == 'h' ? model.params.hs_weights.row(h++)
                                                  : model.params.ns_weights.row(n++);
    std::copy_n(wv.vectors.row(r).data(), dim, dst.data());
  }
  model.config.hs = hs_rows > 0;
  model.config.negative = ns_rows > 0 ? std::max(model.config.negative, 1) : 0;
}

}  // namespace medvec
