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

#include "medvec/sigmoid.h"

namespace medvec {

Sigmoid::Sigmoid(SigmoidMode mode) : mode_(mode) {
  const double width = 2 * kMaxArg / kTableSize;
  for (int i = 0; i < kTableSize; ++i) {
    table_[i] = exact(-kMaxArg + (i + 0.5) * width);
  }
}

}  // namespace medvec
