// Copyright 2026 The dopd Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace dopd {

// Named substreams of one master seed. Each generator owns its stream, so
// changing how many draws one component makes never shifts another.
enum class Stream : std::uint32_t {
  kSensors = 1,
  kTargetSteps = 2,
  kNoise = 3,
  kConstraints = 4,
  kGraph = 5,
  kDither = 6,
  kShuffle = 7,
  kVerify = 8,
};

class Rng {
 public:
  Rng(std::uint64_t seed, Stream stream, std::uint64_t substream = 0);

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits; portable across standard libraries.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dopd
