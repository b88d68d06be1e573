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

// Word-vector files in the classic word2vec layout.
//
// Binary: "<rows> <dim>\n", then per row the word bytes, one space, `dim`
// little-endian IEEE-754 float32 values and "\n".
// Text:   "<rows> <dim>\n", then "<word> <f1> ... <fdim>\n" with shortest
// round-trip decimal floats.
//
// save_model() additionally writes the output weights to "<path>.weights" in
// the same layout, with rows named "hs:<i>" and "ns:<i>".

#ifndef MEDVEC_MODEL_IO_H_
#define MEDVEC_MODEL_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medvec/matrix.h"
#include "medvec/trainer.h"

namespace medvec {

enum class VectorFormat { kAuto, kBinary, kText };

struct WordVectors {
  std::vector<std::string> words;
  DenseMatrix<float> vectors;
};

std::string encode_vectors(std::span<const std::string> words,
                           const DenseMatrix<float>& vectors, bool binary);

// Parses a whole vector file held in memory. Throws FormatError with the
// byte offset of the first problem (bad header, truncated record, duplicate
// word, missing newline).
WordVectors decode_vectors(std::string_view bytes,
                           VectorFormat format = VectorFormat::kAuto);

void save_vectors(const std::filesystem::path& path,
                  std::span<const std::string> words,
                  const DenseMatrix<float>& vectors, bool binary);

WordVectors load_vectors(const std::filesystem::path& path,
                         VectorFormat format = VectorFormat::kAuto);

std::filesystem::path weights_path(const std::filesystem::path& model_path);

// Input vectors to `path`, output weights to weights_path(path).
void save_model(const EmbeddingModel& model, const std::filesystem::path& path,
                bool binary);

// Input vectors and vocabulary (counts are zero; the file stores none).
EmbeddingModel load_model(const std::filesystem::path& path,
                          VectorFormat format = VectorFormat::kAuto);

// Restores hs/ns weights from the sidecar into a loaded model.
void load_weights(const std::filesystem::path& model_path, EmbeddingModel& model);

}  // namespace medvec

#endif  // MEDVEC_MODEL_IO_H_
