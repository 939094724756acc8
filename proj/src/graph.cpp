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

#include "dopd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace dopd {

GraphRound::GraphRound(int agents, Round round, std::vector<Edge> edges)
    : agents_(agents), round_(round), edges_(std::move(edges)) {
  require(agents >= 1, ErrorCode::kConfig, "graph needs at least one agent");
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  in_.assign(agents, {});
  out_degree_.assign(agents, 0);
  for (const Edge& e : edges_) {
    if (e.from < 0 || e.from >= agents || e.to < 0 || e.to >= agents) {
      raise(ErrorCode::kIndex, "edge endpoint out of range");
    }
    require(e.from != e.to, ErrorCode::kConfig, "self-loops are implicit");
    in_[e.to].push_back(e.from);
    ++out_degree_[e.from];
  }
  for (auto& list : in_) std::sort(list.begin(), list.end());
}

int GraphRound::broadcasting_agents() const {
  return static_cast<int>(
      std::count_if(out_degree_.begin(), out_degree_.end(), [](int d) { return d > 0; }));
}

bool GraphRound::has_edge(int from, int to) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

bool GraphRound::symmetric() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [&](const Edge& e) { return has_edge(e.to, e.from); });
}

std::array<std::pair<int, int>, 4> ring_segments(int agents) {
  std::array<std::pair<int, int>, 4> out{};
  for (int k = 0; k < 4; ++k) {
    const int first = std::max(1, k * agents / 4);
    const int last = k == 3 ? agents - 1 : (k + 1) * agents / 4 - 1;
    out[k] = {first, last};
  }
  return out;
}

GraphRound generate_round_graph(int agents, double rho, Round t, Rng& rng) {
  require(agents >= 2, ErrorCode::kConfig, "the round-graph generator needs n >= 2");
  if (!(rho >= 0.0 && rho <= 1.0)) raise(ErrorCode::kConfig, "edge probability must lie in [0, 1]");
  require(t >= 1, ErrorCode::kPrecondition, "rounds start at 1");
  std::vector<Edge> edges;
  for (int i = 0; i < agents; ++i) {
    for (int j = i + 1; j < agents; ++j) {
      if (rng.uniform() < rho) {
        edges.push_back({i, j});
        edges.push_back({j, i});
      }
    }
  }
  const auto [first, last] = ring_segments(agents)[static_cast<std::size_t>((t - 1) % 4)];
  // 1-based pair (i, i+1) is 0-based (i-1, i).
  for (int i = first; i <= last; ++i) {
    edges.push_back({i - 1, i});
    edges.push_back({i, i - 1});
  }
  return GraphRound(agents, t, std::move(edges));
}

GraphRound complete_graph(int agents, Round t) {
  std::vector<Edge> edges;
  for (int i = 0; i < agents; ++i) {
    for (int j = 0; j < agents; ++j) {
      if (i != j) edges.push_back({i, j});
    }
  }
  return GraphRound(agents, t, std::move(edges));
}

MixingMatrix mixing_matrix(const GraphRound& graph) {
  const int n = graph.agents();
  require(graph.symmetric(), ErrorCode::kPrecondition,
          "uniform-weight mixing needs a symmetric graph");
  MixingMatrix w{Matrix::Zero(n, n), 1.0 / n};
  for (const Edge& e : graph.edges()) w.weights(e.to, e.from) = 1.0 / n;
  // (n - deg) / n rather than 1 - deg / n: one rounding, never below 1/n.
  for (int i = 0; i < n; ++i) {
    const int degree = static_cast<int>(graph.in_neighbors(i).size());
    require(degree < n, ErrorCode::kPrecondition, "mixing diagonal fell below the weight floor");
    w.weights(i, i) = static_cast<double>(n - degree) / n;
  }
  return w;
}

void validate_doubly_stochastic(const MixingMatrix& w, double tolerance) {
  const Matrix& m = w.weights;
  require(m.rows() == m.cols(), ErrorCode::kPrecondition, "mixing matrix must be square");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::abs(m.row(i).sum() - 1.0) > tolerance || std::abs(m.col(i).sum() - 1.0) > tolerance) {
      raise(ErrorCode::kPrecondition, "mixing matrix is not doubly stochastic");
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0.0 || (m(i, j) > 0.0 && m(i, j) < w.floor)) {
        raise(ErrorCode::kPrecondition, "mixing matrix entry violates the weight floor");
      }
    }
  }
}

bool check_b_connectivity(std::span<const GraphRound> window) {
  require(!window.empty(), ErrorCode::kPrecondition, "connectivity window is empty");
  const int n = window.front().agents();
  std::vector<std::vector<int>> forward(n), backward(n);
  for (const GraphRound& g : window) {
    require(g.agents() == n, ErrorCode::kPrecondition, "window mixes graph sizes");
    for (const Edge& e : g.edges()) {
      forward[e.from].push_back(e.to);
      backward[e.to].push_back(e.from);
    }
  }
  // Strongly connected iff every vertex is reachable from 0 in both directions.
  const auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(forward) && reaches_all(backward);
}

ConsensusConstants consensus_constants(int agents, double floor, int window) {
  require(agents >= 1 && window >= 1, ErrorCode::kConfig, "invalid consensus parameters");
  require(floor > 0.0 && floor < 1.0, ErrorCode::kConfig, "weight floor must lie in (0, 1)");
  const double base = 1.0 - floor / (4.0 * agents * agents);
  return {std::pow(base, -2.0), std::pow(base, 1.0 / window), window};
}

double consensus_decay_check(std::span<const MixingMatrix> sequence) {
  require(!sequence.empty(), ErrorCode::kPrecondition, "empty mixing sequence");
  const Eigen::Index n = sequence.front().weights.rows();
  Matrix product = Matrix::Identity(n, n);
  for (const MixingMatrix& w : sequence) {
    validate_doubly_stochastic(w, 1e-10);
    product = w.weights * product;
  }
  return (product.array() - 1.0 / static_cast<double>(n)).abs().maxCoeff();
}

void write_edge_trace(std::ostream& out, const GraphRound& graph) {
  for (const Edge& e : graph.edges()) {
    out << graph.round() << ' ' << e.from << ' ' << e.to << '\n';
  }
}

SegmentTopology::SegmentTopology(int agents, double rho, std::uint64_t seed)
    : agents_(agents), rho_(rho), rng_(seed, Stream::kGraph) {
  require(agents >= 2, ErrorCode::kConfig, "the round-graph generator needs n >= 2");
  if (!(rho >= 0.0 && rho <= 1.0)) raise(ErrorCode::kConfig, "edge probability must lie in [0, 1]");
}

GraphRound SegmentTopology::next(Round t) { return generate_round_graph(agents_, rho_, t, rng_); }

GraphRound StaticTopology::next(Round t) {
  return GraphRound(graph_.agents(), t, graph_.edges());
}

}  // namespace dopd
