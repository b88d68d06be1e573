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

#ifndef MEDVEC_ERROR_H_
#define MEDVEC_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace medvec {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration. The CLI maps this to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class InputError : public Error {
 public:
  using Error::Error;
};

// Malformed bytes at a known position (bad UTF-8, broken model file).
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t byte_offset)
      : Error(what + " at byte offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class DecodeError : public FormatError {
 public:
  using FormatError::FormatError;
};

// One or more query words are absent from the model vocabulary.
class NotFoundError : public Error {
 public:
  explicit NotFoundError(std::vector<std::string> words);

  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
};

// Cosine similarity requested for a zero-norm vector.
class UndefinedSimilarityError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace medvec

#endif  // MEDVEC_ERROR_H_
