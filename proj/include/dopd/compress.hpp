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
#include <iosfwd>
#include <limits>

#include "dopd/common.hpp"
#include "dopd/rng.hpp"

namespace dopd {

enum class CompressorKind {
  kRound,     // Delta * floor(x / Delta + 1/2), deterministic
  kIdentity,  // lossless, 64-bit floats on the wire
  kDithered,  // Delta * floor(x / Delta + u), u ~ U[0,1)^p
};

const char* to_string(CompressorKind kind);

// Norm-equivalence factors between the d-norm and the Euclidean norm:
// |x|_d <= upper |x| and |x| <= lower_inverse |x|_d.
struct NormFactors {
  double upper = 1.0;          // p-hat
  double lower_inverse = 1.0;  // p-tilde
};

NormFactors norm_equivalence(int dimension, double norm_index);

class Compressor {
 public:
  static Compressor rounding(int step, int bits_per_integer);
  static Compressor identity();
  static Compressor dithered(int step, int bits_per_integer);

  CompressorKind kind() const { return kind_; }
  int step() const { return step_; }
  int bits_per_integer() const { return bits_; }
  bool lossless() const { return kind_ == CompressorKind::kIdentity; }
  bool stochastic() const { return kind_ == CompressorKind::kDithered; }

  // d in E[|C(x) - x|_d^2] <= C; infinity for the lattice quantizers.
  double norm_index() const;
  // The constant C.
  double error_bound() const;
  NormFactors norm_factors(int dimension) const { return norm_equivalence(dimension, norm_index()); }

 private:
  Compressor(CompressorKind kind, int step, int bits) : kind_(kind), step_(step), bits_(bits) {}

  CompressorKind kind_;
  int step_;
  int bits_;
};

// Quantizer output divided by Delta (integer-valued; stored as doubles so
// that the huge coordinates produced by tiny scaling factors stay exact in
// magnitude). For the identity compressor `lattice` holds the raw values.
struct CompressedMessage {
  Vector lattice;
  std::int64_t bits = 0;
  bool fits = true;  // every coordinate fits a signed q-bit integer
};

struct Compression {
  Vector value;  // C(x)
  CompressedMessage message;
};

// `dither` is required for the dithered kind and ignored otherwise.
Compression compress(const Compressor& compressor, const Vector& x, Rng* dither = nullptr);

std::int64_t bit_cost(const Compressor& compressor, int dimension);

// Empirical worst (deterministic kinds) or mean (dithered) of |C(x) - x|_d^2
// over uniform inputs in [-range, range]^p.
double verify_error_bound(const Compressor& compressor, int samples, Rng& rng, int dimension = 2,
                          double range = 100.0);

// "t sender k_1 ... k_p delta bits"
void write_message_record(std::ostream& out, Round t, int sender, const Compressor& compressor,
                          const CompressedMessage& message);

}  // namespace dopd
