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

#ifndef MEDVEC_CLI_H_
#define MEDVEC_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace medvec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // bad flags or configuration
inline constexpr int kExitRuntime = 2;  // I/O, format or evaluation failure

// Runs one subcommand. `args[0]` is the program name. Results go to `out`,
// diagnostics to `err` (and the log to stderr).
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace medvec::cli

#endif  // MEDVEC_CLI_H_
