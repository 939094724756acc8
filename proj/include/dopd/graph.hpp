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

#include <array>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "dopd/common.hpp"
#include "dopd/rng.hpp"

namespace dopd {

// Directed edge (from, to): agent `to` receives from agent `from`.
struct Edge {
  int from = 0;
  int to = 0;

  auto operator<=>(const Edge&) const = default;
};

// Communication graph of one round. Self-loops are implicit and never stored.
class GraphRound {
 public:
  GraphRound(int agents, Round round, std::vector<Edge> edges);

  int agents() const { return agents_; }
  Round round() const { return round_; }
  // Sorted by (from, to), unique.
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t directed_edge_count() const { return edges_.size(); }

  // Ascending.
  const std::vector<int>& in_neighbors(int agent) const { return in_[agent]; }
  int out_degree(int agent) const { return out_degree_[agent]; }
  // Agents with at least one out-neighbor.
  int broadcasting_agents() const;

  bool has_edge(int from, int to) const;
  bool symmetric() const;

 private:
  int agents_;
  Round round_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> in_;
  std::vector<int> out_degree_;
};

// Doubly stochastic W_t; [W]_{ij} weights agent j's value in agent i's mix.
struct MixingMatrix {
  Matrix weights;
  double floor = 0.0;  // w: every positive entry is >= floor
};

struct ConsensusConstants {
  double tau = 1.0;
  double lambda = 0.0;
  int window = 1;
};

// Inclusive 1-based index ranges [first, last] of the four deterministic
// path segments; segment k adds edges (i, i+1) for i in its range. For n=100
// these are [1,24], [25,49], [50,74], [75,99]. Empty ranges have last < first.
std::array<std::pair<int, int>, 4> ring_segments(int agents);

// Undirected random graph with per-pair probability rho, plus the path
// segment for residue class ((t-1) mod 4). Consumes exactly n(n-1)/2 draws
// from `rng` regardless of rho.
GraphRound generate_round_graph(int agents, double rho, Round t, Rng& rng);

GraphRound complete_graph(int agents, Round t);

// Off-diagonal 1/n on edges; the diagonal completes each row to 1.
MixingMatrix mixing_matrix(const GraphRound& graph);

// Throws kPrecondition unless rows and columns sum to 1 within `tolerance`,
// entries are non-negative and positive entries are >= floor.
void validate_doubly_stochastic(const MixingMatrix& w, double tolerance = 1e-12);

// True iff the union of the window's edge sets is strongly connected.
bool check_b_connectivity(std::span<const GraphRound> window);

ConsensusConstants consensus_constants(int agents, double floor, int window);

// max_{ij} |[W_t ... W_s]_{ij} - 1/n| for the given sequence (W_s first).
double consensus_decay_check(std::span<const MixingMatrix> sequence);

// One line per directed edge: "t from to".
void write_edge_trace(std::ostream& out, const GraphRound& graph);

// Source of per-round topologies for the engine.
class TopologySource {
 public:
  virtual ~TopologySource() = default;
  virtual GraphRound next(Round t) = 0;
};

class SegmentTopology final : public TopologySource {
 public:
  SegmentTopology(int agents, double rho, std::uint64_t seed);
  GraphRound next(Round t) override;

 private:
  int agents_;
  double rho_;
  Rng rng_;
};

class StaticTopology final : public TopologySource {
 public:
  explicit StaticTopology(GraphRound graph) : graph_(std::move(graph)) {}
  GraphRound next(Round t) override;

 private:
  GraphRound graph_;
};

}  // namespace dopd
