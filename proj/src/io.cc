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

#include "medvec/io.h"

#include <unistd.h>

#include <sstream>
#include <system_error>

#include "medvec/error.h"

namespace medvec {

namespace fs = std::filesystem;

AtomicFileWriter::AtomicFileWriter(fs::path path, bool binary)
    : path_(std::move(path)) {
  tmp_path_ = path_;
  tmp_path_ += ".tmp." + std::to_string(::getpid());
  auto mode = std::ios::out | std::ios::trunc;
  if (binary) mode |= std::ios::binary;
  out_.open(tmp_path_, mode);
  if (!out_) {
    throw InputError("cannot open " + path_.string() + " for writing");
  }
}

AtomicFileWriter::~AtomicFileWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    fs::remove(tmp_path_, ec);
  }
}

void AtomicFileWriter::commit() {
  out_.flush();
  if (!out_) throw InputError("write failed for " + path_.string());
  out_.close();
  std::error_code ec;
  fs::rename(tmp_path_, path_, ec);
  if (ec) {
    fs::remove(tmp_path_, ec);
    throw InputError("cannot rename onto " + path_.string() + ": " +
                     ec.message());
  }
  committed_ = true;
}

std::ifstream open_input(const fs::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::in | std::ios::binary : std::ios::in);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::string read_file(const fs::path& path) {
  std::ifstream in = open_input(path, /*binary=*/true);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InputError("read failed for " + path.string());
  return std::move(buf).str();
}

}  // namespace medvec
