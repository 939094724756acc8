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

#include <span>
#include <vector>

#include "dopd/common.hpp"
#include "dopd/history.hpp"
#include "dopd/linear_minimizer.hpp"
#include "dopd/problem.hpp"

namespace dopd {

// Global gradients (1/n) sum_j grad f_{j,t}(x_i), the inner products
// <grad f_t(x_i), x_i> and |[g_t(x_i)]_+| with g_t stacked over all agents.
// This evaluator sees every oracle and is never used by the algorithm.
RoundMetrics evaluate_round_metrics(const RoundProblem& problem, Round t,
                                    std::span<const Vector> points);

// c_i = sum_{t <= T} grad f_t(x_{i,t}). kUnavailable without metrics.
Vector accumulate_gradient(const RunHistory& history, int agent, Round horizon);

// (1/n) sum_i [ sum_t <grad f_t(x_{i,t}), x_{i,t}> - min_{x in X_T} <c_i, x> ].
// A problem-built `snapshot` must cover exactly rounds 1..T. Signed.
double network_regret(const RunHistory& history, const FeasibleSetSnapshot& snapshot,
                      Round horizon, const MinimizerOptions& options = {});

// (1/n) sum_i sum_{t <= T} |[g_t(x_{i,t})]_+|.
double network_ccv(const RunHistory& history, Round horizon);

struct GrowthFit {
  double slope = 0.0;
  int used = 0;
  int excluded = 0;  // non-positive or non-finite values
};

// Least-squares slope of log(value) against log(T). kPrecondition with fewer
// than four usable points.
GrowthFit growth_exponent(std::span<const double> horizons, std::span<const double> values);

struct CheckpointMetrics {
  Round t = 0;
  double net_regret = 0.0;
  double net_ccv = 0.0;
  std::int64_t bits_sent = 0;
  std::int64_t bits_compressed = 0;
  std::int64_t bits_baseline = 0;
  std::int64_t messages_per_source = 0;  // cumulative broadcasting agents
  double slope_regret = 0.0;  // |Net-Reg| fit over checkpoints so far; NaN if < 4
  double slope_ccv = 0.0;
};

// Ascending, unique checkpoints within 1..history.horizon().
std::vector<CheckpointMetrics> evaluate_checkpoints(const RoundProblem& problem,
                                                    const RunHistory& history,
                                                    std::span<const Round> checkpoints,
                                                    const MinimizerOptions& options = {});

// 2^5, 2^6, ... up to T, plus T itself when it is not a power of two.
std::vector<Round> default_checkpoints(Round horizon);

}  // namespace dopd
