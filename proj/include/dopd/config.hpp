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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dopd/common.hpp"
#include "dopd/compress.hpp"
#include "dopd/engine.hpp"
#include "dopd/schedule.hpp"

namespace dopd {

struct ProblemBlock {
  int agents = 10;
  int dimension = 2;
  int constraints_per_agent = 2;
  double margin = 0.01;
  double box_half_width = 5.0;
  bool no_slater = false;
  std::string instance_file;  // replaces generation when set
};

enum class GraphKind { kSegmented, kComplete };

const char* to_string(GraphKind kind);

struct GraphBlock {
  GraphKind kind = GraphKind::kSegmented;
  double rho = 0.1;
  int window = 4;  // B
};

struct CompressorBlock {
  CompressorKind kind = CompressorKind::kRound;
  int delta = 1;
  int bits = 8;  // q
};

struct ScheduleBlock {
  ScheduleFamily family = ScheduleFamily::kPolynomial;
  double theta1 = 0.5;
  double theta2 = 1.0;
  double mu = 0.9;
  std::optional<double> alpha0;  // family default when unset
  std::optional<double> gamma0;  // min(1 / (4 G2^2), 0.1) when unset
  double s0 = 1.0;
};

struct RunBlock {
  Round horizon = 4096;
  std::uint64_t seed = 1;
  bool trace = false;
  Algorithm algorithm = Algorithm::kCompressed;
  EstimateMode estimates = EstimateMode::kCanonical;
  bool metrics = true;
  std::vector<Round> checkpoints;  // default_checkpoints(T) when empty
};

struct RunConfig {
  std::string name = "run";
  ProblemBlock problem;
  GraphBlock graph;
  CompressorBlock compressor;
  ScheduleBlock schedule;
  RunBlock run;
};

inline constexpr double kPolynomialAlpha0 = 0.3;
inline constexpr double kGeometricAlpha0 = 0.1;
inline constexpr double kGammaCap = 0.1;

double default_alpha0(ScheduleFamily family);

// Range checks that need no problem data. Throws kConfig.
void validate(const RunConfig& config);

// JSON text. Unknown keys and malformed values raise kParse; out-of-range
// values raise kConfig.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);
std::string serialize_run_config(const RunConfig& config);

Compressor make_compressor(const CompressorBlock& block);

}  // namespace dopd
