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

#include <optional>
#include <span>
#include <vector>

#include "dopd/box.hpp"
#include "dopd/compress.hpp"
#include "dopd/graph.hpp"
#include "dopd/history.hpp"
#include "dopd/problem.hpp"
#include "dopd/rng.hpp"
#include "dopd/schedule.hpp"

namespace dopd {

struct AgentState {
  Vector primal;     // z_{i,t}
  Vector point;      // x_{i,t}, last working point
  Vector dual;       // v_{i,t+1}
  Vector direction;  // omega_{i,t+1}
};

struct NetworkState {
  std::vector<AgentState> agents;
  Round round = 1;  // the next round to execute
};

// z_{i,1} = initial[i] (projected onto X); all-zero otherwise.
NetworkState initial_state(const RoundProblem& problem,
                           std::span<const Vector> initial = {});

enum class EstimateMode {
  // One owner-maintained zhat_j shared by every reader.
  kCanonical,
  // Each reader keeps its own copy of zhat_j and only advances it in rounds
  // where j is an in-neighbor; copies drift apart under changing topologies.
  kPerReader,
};

// zhat_{j,t} for every j, starting from zhat_{j,0} = 0.
class EstimateRegistry {
 public:
  EstimateRegistry(int agents, int dimension, EstimateMode mode = EstimateMode::kCanonical);

  EstimateMode mode() const { return mode_; }
  const Vector& canonical(int owner) const { return canonical_[owner]; }
  // The estimate of `owner` held by `reader`.
  const Vector& view(int reader, int owner) const;

  // Reconstruction zhat <- P_X(zhat + s C(.)), applied by the owner
  // and by every reader that received the message this round.
  void advance(int owner, const Vector& increment, const BoxSet& box,
               std::span<const int> readers);
  // Lossless path: zhat_j = z_j exactly.
  void assign(int owner, const Vector& value, std::span<const int> readers);

 private:
  EstimateMode mode_;
  std::vector<Vector> canonical_;
  std::vector<std::vector<Vector>> copies_;  // [reader][owner], per-reader mode only
};

struct RoundOptions {
  bool trace = false;
};

struct RoundResult {
  RoundSummary summary;
  std::vector<Vector> points;  // x_{i,t}
  // Points, primal iterates or estimates outside X, plus negative duals.
  std::int64_t infeasible = 0;
  std::optional<RoundTrace> trace;
};

// One synchronized round of the compressed primal-dual method: every agent
// broadcasts C((z_j - zhat_j)/s_t), estimates advance, agents mix estimates
// with W_t, then take the dual, direction and projected primal steps.
// `dither` holds one stream per agent and is only read by stochastic
// compressors.
RoundResult compressed_round(NetworkState& state, EstimateRegistry& registry,
                             const RoundProblem& problem, const GraphRound& graph,
                             const MixingMatrix& mixing, const Schedule& schedule,
                             const Compressor& compressor, std::span<Rng> dither,
                             const RoundOptions& options = {});

// Uncompressed baseline: identical except agents mix the raw z_j.
RoundResult baseline_round(NetworkState& state, const RoundProblem& problem,
                           const GraphRound& graph, const MixingMatrix& mixing,
                           const Schedule& schedule, const RoundOptions& options = {});

enum class Algorithm { kCompressed, kBaseline };

const char* to_string(Algorithm algorithm);

struct EngineOptions {
  Algorithm algorithm = Algorithm::kCompressed;
  EstimateMode estimates = EstimateMode::kCanonical;
  bool trace = false;
  bool record_metrics = true;
  std::uint64_t seed = 1;  // dither streams
  std::vector<Vector> initial;
};

// Runs `horizon` rounds. Errors are rethrown with the failing round attached.
RunHistory run(const RoundProblem& problem, TopologySource& topology, const Schedule& schedule,
               const Compressor& compressor, Round horizon, const EngineOptions& options = {});

}  // namespace dopd
