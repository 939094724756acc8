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
#include <string>
#include <vector>

#include "dopd/common.hpp"
#include "dopd/compress.hpp"
#include "dopd/graph.hpp"
#include "dopd/schedule.hpp"

namespace dopd {

// Scalars logged for every round regardless of the trace flag.
struct RoundSummary {
  Round t = 0;
  ScheduleValues schedule;
  std::int64_t directed_edges = 0;
  std::int64_t broadcasting_agents = 0;
  std::int64_t bits_sent = 0;        // what this run actually transmitted
  std::int64_t bits_compressed = 0;  // directed edges x bit_cost(compressor, p)
  std::int64_t bits_baseline = 0;    // directed edges x 64 p
  int overflow_messages = 0;         // lattice coordinates outside the q-bit range
  // max_i |zhat_{i,t} - x_{i,t-1}|, the estimate gap of round t-1; NaN at t = 1.
  double estimate_gap = 0.0;
};

// Omniscient per-round evaluation feeding the regret and violation metrics.
struct RoundMetrics {
  Matrix global_gradients;  // p x n, column i is grad f_t(x_{i,t})
  Vector inner;             // <grad f_t(x_{i,t}), x_{i,t}>
  Vector violation;         // |[g_t(x_{i,t})]_+|, stacked over all agents
};

// Full per-agent vectors, stored only when tracing.
struct RoundTrace {
  GraphRound graph;
  std::vector<Vector> points;     // x_{i,t}
  std::vector<Vector> primal;     // z_{i,t+1}
  std::vector<Vector> estimates;  // canonical zhat_{j,t}
  std::vector<Vector> duals;      // v_{i,t+1}
  std::vector<CompressedMessage> messages;  // one per sender (empty for the baseline)
};

struct RunHistory {
  int agents = 0;
  int dimension = 0;
  int stacked_constraints = 0;  // m = sum_i m_i
  bool has_metrics = false;
  std::vector<RoundSummary> rounds;
  std::vector<RoundMetrics> metrics;
  std::vector<RoundTrace> traces;
  std::vector<Vector> final_primal;
  // Count of recorded x, z or zhat outside X plus negative dual entries.
  std::int64_t feasibility_violations = 0;
  std::vector<std::string> warnings;

  Round horizon() const { return static_cast<Round>(rounds.size()); }
};

}  // namespace dopd
