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

#ifndef MEDVEC_IO_H_
#define MEDVEC_IO_H_

#include <filesystem>
#include <fstream>
#include <string>

namespace medvec {

// Writes to "<path>.tmp.<pid>" and renames onto `path` in commit(). If the
// object is destroyed without commit() the temporary file is removed.
class AtomicFileWriter {
 public:
  explicit AtomicFileWriter(std::filesystem::path path, bool binary = true);
  ~AtomicFileWriter();

  AtomicFileWriter(const AtomicFileWriter&) = delete;
  AtomicFileWriter& operator=(const AtomicFileWriter&) = delete;

  std::ofstream& stream() { return out_; }
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

std::ifstream open_input(const std::filesystem::path& path,
                         bool binary = false);

std::string read_file(const std::filesystem::path& path);

}  // namespace medvec

#endif  // MEDVEC_IO_H_
