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

#ifndef MEDVEC_SIGMOID_H_
#define MEDVEC_SIGMOID_H_

#include <array>
#include <cmath>

namespace medvec {

enum class SigmoidMode { kExact, kTable };

// Logistic function. Table mode looks up one of 1000 bins over [-6, 6]
// (value taken at the bin centre) and clamps outside that range.
class Sigmoid {
 public:
  static constexpr int kTableSize = 1000;
  static constexpr double kMaxArg = 6.0;

  explicit Sigmoid(SigmoidMode mode = SigmoidMode::kExact);

  SigmoidMode mode() const { return mode_; }

  double operator()(double z) const {
    if (mode_ == SigmoidMode::kExact) return exact(z);
    return lookup(z);
  }

  static double exact(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
  }

  double lookup(double z) const {
    if (z <= -kMaxArg) return table_.front();
    if (z >= kMaxArg) return table_.back();
    int bin = static_cast<int>((z + kMaxArg) * (kTableSize / (2 * kMaxArg)));
    if (bin >= kTableSize) bin = kTableSize - 1;
    return table_[bin];
  }

  // -log(sigmoid(z)), stable for large |z|.
  static double neg_log(double z) {
    if (z >= 0) return std::log1p(std::exp(-z));
    return -z + std::log1p(std::exp(z));
  }

 private:
  SigmoidMode mode_;
  std::array<double, kTableSize> table_{};
};

}  // namespace medvec

#endif  // MEDVEC_SIGMOID_H_
