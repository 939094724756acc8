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

#include "dopd/compress.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace dopd {

namespace {

constexpr int kFloatBits = 64;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* to_string(CompressorKind kind) {
  switch (kind) {
    case CompressorKind::kRound: return "round";
    case CompressorKind::kIdentity: return "identity";
    case CompressorKind::kDithered: return "dithered";
  }
  return "?";
}

NormFactors norm_equivalence(int dimension, double d) {
  require(dimension >= 1, ErrorCode::kConfig, "dimension must be positive");
  require(d >= 1.0, ErrorCode::kConfig, "norm index must be >= 1");
  const double p = dimension;
  if (d <= 2.0) return {std::pow(p, 1.0 / d - 0.5), 1.0};
  const double inv = std::isinf(d) ? 0.0 : 1.0 / d;
  return {1.0, std::pow(p, 0.5 - inv)};
}

Compressor Compressor::rounding(int step, int bits) {
  require(step > 0, ErrorCode::kConfig, "quantizer step must be a positive integer");
  require(bits >= 1 && bits <= 64, ErrorCode::kConfig, "bits per integer must lie in [1, 64]");
  return {CompressorKind::kRound, step, bits};
}

Compressor Compressor::identity() { return {CompressorKind::kIdentity, 0, kFloatBits}; }

Compressor Compressor::dithered(int step, int bits) {
  require(step > 0, ErrorCode::kConfig, "quantizer step must be a positive integer");
  require(bits >= 1 && bits <= 64, ErrorCode::kConfig, "bits per integer must lie in [1, 64]");
  return {CompressorKind::kDithered, step, bits};
}

double Compressor::norm_index() const { return lossless() ? 2.0 : kInf; }

double Compressor::error_bound() const {
  const double delta = step_;
  switch (kind_) {
    case CompressorKind::kRound: return delta * delta / 4.0;
    case CompressorKind::kIdentity: return 0.0;
    case CompressorKind::kDithered: return delta * delta;
  }
  return kInf;
}

Compression compress(const Compressor& compressor, const Vector& x, Rng* dither) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (!std::isfinite(x[k])) raise(ErrorCode::kNumeric, "compressor input is not finite");
  }
  Compression out;
  out.message.bits = bit_cost(compressor, static_cast<int>(x.size()));
  if (compressor.lossless()) {
    out.value = x;
    out.message.lattice = x;
    return out;
  }
  if (compressor.stochastic() && dither == nullptr) {
    raise(ErrorCode::kPrecondition, "dithered compressor needs a random stream");
  }
  const double delta = compressor.step();
  // Signed q-bit range [-2^(q-1), 2^(q-1) - 1].
  const double hi = std::ldexp(1.0, compressor.bits_per_integer() - 1) - 1.0;
  const double lo = -hi - 1.0;
  out.message.lattice.resize(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    // floor(y + shift) as floor(y) plus a carry; y - floor(y) is exact, so
    // the sum never rounds across an integer.
    const double shift = compressor.stochastic() ? dither->uniform() : 0.5;
    const double y = x[k] / delta;
    const double base = std::floor(y);
    const double level = base + ((y - base) >= 1.0 - shift ? 1.0 : 0.0);
    out.message.lattice[k] = level;
    if (level < lo || level > hi) out.message.fits = false;
  }
  out.value = delta * out.message.lattice;
  return out;
}

std::int64_t bit_cost(const Compressor& compressor, int dimension) {
  require(dimension >= 1, ErrorCode::kPrecondition, "dimension must be positive");
  return static_cast<std::int64_t>(dimension) * compressor.bits_per_integer();
}

double verify_error_bound(const Compressor& compressor, int samples, Rng& rng, int dimension,
                          double range) {
  require(samples >= 1, ErrorCode::kPrecondition, "need at least one sample");
  const double d = compressor.norm_index();
  double worst = 0.0;
  double total = 0.0;
  Vector x(dimension);
  for (int s = 0; s < samples; ++s) {
    for (int k = 0; k < dimension; ++k) x[k] = rng.uniform(-range, range);
    const Vector err = compress(compressor, x, &rng).value - x;
    const double norm = std::isinf(d) ? err.cwiseAbs().maxCoeff() : err.lpNorm<2>();
    worst = std::max(worst, norm * norm);
    total += norm * norm;
  }
  return compressor.stochastic() ? total / samples : worst;
}

void write_message_record(std::ostream& out, Round t, int sender, const Compressor& compressor,
                          const CompressedMessage& message) {
  char buf[64];
  out << t << ' ' << sender;
  for (double k : message.lattice) {
    if (compressor.lossless()) {
      std::snprintf(buf, sizeof(buf), "%a", k);
    } else {
      std::snprintf(buf, sizeof(buf), "%.0f", k);
    }
    out << ' ' << buf;
  }
  out << ' ' << compressor.step() << ' ' << message.bits << '\n';
}

}  // namespace dopd
