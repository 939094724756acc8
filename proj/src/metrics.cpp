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

#include "dopd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace dopd {

RoundMetrics evaluate_round_metrics(const RoundProblem& problem, Round t,
                                    std::span<const Vector> points) {
  const int n = problem.agents();
  const int p = problem.dimension();
  require(static_cast<int>(points.size()) == n, ErrorCode::kPrecondition,
          "one point per agent is required");
  RoundMetrics m;
  m.global_gradients = Matrix::Zero(p, n);
  m.inner = Vector::Zero(n);
  m.violation = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    const Vector& x = points[i];
    Vector grad = Vector::Zero(p);
    double squares = 0.0;
    for (int j = 0; j < n; ++j) {
      grad += problem.loss_gradient(j, t, x);
      const Vector g = problem.constraint(j, t, x).value;
      squares += positive_part(g).squaredNorm();
    }
    grad /= static_cast<double>(n);
    m.global_gradients.col(i) = grad;
    m.inner[i] = grad.dot(x);
    m.violation[i] = std::sqrt(squares);
  }
  return m;
}

namespace {

void check_metrics(const RunHistory& history, Round horizon) {
  if (!history.has_metrics) raise(ErrorCode::kUnavailable, "regret unavailable: metrics disabled");
  require(horizon >= 0 && horizon <= static_cast<Round>(history.metrics.size()),
          ErrorCode::kIndex, "horizon beyond the recorded metrics");
}

}  // namespace

Vector accumulate_gradient(const RunHistory& history, int agent, Round horizon) {
  check_metrics(history, horizon);
  require(agent >= 0 && agent < history.agents, ErrorCode::kIndex, "agent out of range");
  Vector c = Vector::Zero(history.dimension);
  for (Round t = 0; t < horizon; ++t) c += history.metrics[t].global_gradients.col(agent);
  return c;
}

double network_regret(const RunHistory& history, const FeasibleSetSnapshot& snapshot,
                      Round horizon, const MinimizerOptions& options) {
  check_metrics(history, horizon);
  require(snapshot.covered() == 0 || snapshot.covered() == horizon, ErrorCode::kPrecondition,
          "snapshot does not cover the requested horizon");
  const int n = history.agents;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double played = 0.0;
    for (Round t = 0; t < horizon; ++t) played += history.metrics[t].inner[i];
    const Vector c = accumulate_gradient(history, i, horizon);
    total += played - minimize_linear(c, snapshot, options).value;
  }
  return total / n;
}

double network_ccv(const RunHistory& history, Round horizon) {
  check_metrics(history, horizon);
  double total = 0.0;
  for (Round t = 0; t < horizon; ++t) total += history.metrics[t].violation.sum();
  return total / history.agents;
}

GrowthFit growth_exponent(std::span<const double> horizons, std::span<const double> values) {
  require(horizons.size() == values.size(), ErrorCode::kPrecondition,
          "horizons and values differ in length");
  GrowthFit fit;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] > 0.0) || !std::isfinite(values[k]) || !(horizons[k] > 0.0)) {
      ++fit.excluded;
      continue;
    }
    lx.push_back(std::log(horizons[k]));
    ly.push_back(std::log(values[k]));
  }
  fit.used = static_cast<int>(lx.size());
  require(fit.used >= 4, ErrorCode::kPrecondition, "growth fit needs at least 4 usable points");
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / fit.used;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / fit.used;
  double sxy = 0.0, sxx = 0.0;
  for (int k = 0; k < fit.used; ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  require(sxx > 0.0, ErrorCode::kPrecondition, "growth fit needs distinct horizons");
  fit.slope = sxy / sxx;
  return fit;
}

std::vector<CheckpointMetrics> evaluate_checkpoints(const RoundProblem& problem,
                                                    const RunHistory& history,
                                                    std::span<const Round> checkpoints,
                                                    const MinimizerOptions& options) {
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    require(checkpoints[k] >= 1 && checkpoints[k] <= history.horizon(), ErrorCode::kIndex,
            "checkpoint outside the run");
    require(k == 0 || checkpoints[k] > checkpoints[k - 1], ErrorCode::kConfig,
            "checkpoints must be strictly increasing");
  }
  check_metrics(history, checkpoints.empty() ? 0 : checkpoints.back());

  std::optional<Vector> anchor = problem.slater_point();
  if (anchor && problem.slater_margin() <= 0.0) anchor.reset();
  FeasibleSetSnapshot snapshot(problem.box(), anchor);

  std::vector<CheckpointMetrics> out;
  std::vector<double> ts, regs, ccvs;
  CheckpointMetrics running;
  Round done = 0;
  for (Round t_k : checkpoints) {
    for (Round t = done; t < t_k; ++t) {
      const RoundSummary& s = history.rounds[t];
      running.bits_sent += s.bits_sent;
      running.bits_compressed += s.bits_compressed;
      running.bits_baseline += s.bits_baseline;
      running.messages_per_source += s.broadcasting_agents;
    }
    done = t_k;
    snapshot.extend(problem, t_k);
    CheckpointMetrics row = running;
    row.t = t_k;
    row.net_regret = network_regret(history, snapshot, t_k, options);
    row.net_ccv = network_ccv(history, t_k);
    ts.push_back(static_cast<double>(t_k));
    regs.push_back(std::abs(row.net_regret));
    ccvs.push_back(row.net_ccv);
    auto slope = [&](const std::vector<double>& v) {
      try {
        return growth_exponent(ts, v).slope;
      } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    row.slope_regret = slope(regs);
    row.slope_ccv = slope(ccvs);
    out.push_back(row);
  }
  return out;
}

std::vector<Round> default_checkpoints(Round horizon) {
  std::vector<Round> out;
  for (Round t = 32; t <= horizon; t *= 2) out.push_back(t);
  if (horizon >= 1 && (out.empty() || out.back() != horizon)) out.push_back(horizon);
  return out;
}

}  // namespace dopd
