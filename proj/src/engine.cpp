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

#include "dopd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dopd/metrics.hpp"

namespace dopd {

const char* to_string(Algorithm algorithm) {
  return algorithm == Algorithm::kCompressed ? "compressed" : "baseline";
}

NetworkState initial_state(const RoundProblem& problem, std::span<const Vector> initial) {
  const int n = problem.agents();
  const int p = problem.dimension();
  require(initial.empty() || static_cast<int>(initial.size()) == n, ErrorCode::kConfig,
          "initial points must be given for every agent");
  NetworkState state;
  state.agents.resize(n);
  for (int i = 0; i < n; ++i) {
    AgentState& a = state.agents[i];
    a.primal = initial.empty() ? Vector::Zero(p) : project_box(initial[i], problem.box());
    a.dual = Vector::Zero(problem.constraint_count(i));
    a.direction = Vector::Zero(p);
  }
  return state;
}

EstimateRegistry::EstimateRegistry(int agents, int dimension, EstimateMode mode)
    : mode_(mode), canonical_(agents, Vector::Zero(dimension)) {
  if (mode_ == EstimateMode::kPerReader) {
    copies_.assign(agents, std::vector<Vector>(agents, Vector::Zero(dimension)));
  }
}

const Vector& EstimateRegistry::view(int reader, int owner) const {
  if (mode_ == EstimateMode::kCanonical || reader == owner) return canonical_[owner];
  return copies_[reader][owner];
}

void EstimateRegistry::advance(int owner, const Vector& increment, const BoxSet& box,
                               std::span<const int> readers) {
  canonical_[owner] = project_box(canonical_[owner] + increment, box);
  if (mode_ == EstimateMode::kPerReader) {
    for (int r : readers) copies_[r][owner] = project_box(copies_[r][owner] + increment, box);
  }
}

void EstimateRegistry::assign(int owner, const Vector& value, std::span<const int> readers) {
  canonical_[owner] = value;
  if (mode_ == EstimateMode::kPerReader) {
    for (int r : readers) copies_[r][owner] = value;
  }
}

namespace {

// x_i = sum_j W_ij source(j) over j in N_in(i) and i, ascending j. Both round
// kinds go through this so that equal inputs give bitwise-equal outputs. The
// final clamp only removes last-bit excursions of the rounded convex
// combination.
template <class Source>
Vector mix(int agent, const GraphRound& graph, const MixingMatrix& mixing, const BoxSet& box,
           Source&& source) {
  const int dimension = box.dimension();
  Vector x = Vector::Zero(dimension);
  bool self_done = false;
  for (int j : graph.in_neighbors(agent)) {
    if (!self_done && j > agent) {
      x += mixing.weights(agent, agent) * source(agent);
      self_done = true;
    }
    x += mixing.weights(agent, j) * source(j);
  }
  if (!self_done) x += mixing.weights(agent, agent) * source(agent);
  return project_box(x, box);
}

void check_inputs(const NetworkState& state, const RoundProblem& problem, const GraphRound& graph,
                  const MixingMatrix& mixing) {
  const int n = problem.agents();
  require(static_cast<int>(state.agents.size()) == n, ErrorCode::kPrecondition,
          "state does not match the problem size");
  require(graph.agents() == n, ErrorCode::kPrecondition, "graph does not match the problem size");
  require(mixing.weights.rows() == n && mixing.weights.cols() == n, ErrorCode::kPrecondition,
          "mixing matrix does not match the problem size");
  require(state.round <= problem.horizon(), ErrorCode::kIndex,
          "round lies beyond the problem horizon");
}

void check_schedule(const ScheduleValues& v) {
  if (!std::isfinite(v.step) || !std::isfinite(v.regularization) || !std::isfinite(v.scale) ||
      v.step <= 0.0 || v.scale <= 0.0) {
    raise(ErrorCode::kNumeric, "non-finite or non-positive schedule value");
  }
}

// Dual, direction and primal updates shared by both round kinds.
void local_updates(NetworkState& state, const RoundProblem& problem, const ScheduleValues& sv,
                   const std::vector<Vector>& points) {
  const Round t = state.round;
  const BoxSet& box = problem.box();
  for (int i = 0; i < problem.agents(); ++i) {
    AgentState& a = state.agents[i];
    const Vector& x = points[i];
    const ConstraintEval g = problem.constraint(i, t, x);
    a.dual = sv.regularization * positive_part(g.value);
    a.direction = problem.loss_gradient(i, t, x) + g.jacobian.transpose() * a.dual;
    a.primal = project_box(x - sv.step * a.direction, box);
    a.point = x;
    if (!a.primal.allFinite() || !a.dual.allFinite()) {
      raise(ErrorCode::kNumeric, "non-finite state for agent " + std::to_string(i));
    }
  }
}

std::int64_t count_infeasible(const NetworkState& state, const std::vector<Vector>& points,
                              const BoxSet& box) {
  std::int64_t bad = 0;
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    const AgentState& a = state.agents[i];
    if (!box.contains(points[i])) ++bad;
    if (!box.contains(a.primal)) ++bad;
    if ((a.dual.array() < 0.0).any()) ++bad;
  }
  return bad;
}

double estimate_gap(const NetworkState& state, const EstimateRegistry* registry) {
  double gap = 0.0;
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    const Vector& prev = state.agents[i].point;
    if (prev.size() == 0) return std::numeric_limits<double>::quiet_NaN();
    const Vector& est =
        registry != nullptr ? registry->canonical(static_cast<int>(i)) : state.agents[i].primal;
    gap = std::max(gap, (est - prev).norm());
  }
  return gap;
}

RoundSummary make_summary(const GraphRound& graph, const ScheduleValues& sv, int dimension,
                          std::int64_t message_bits, std::int64_t compressed_bits) {
  RoundSummary s;
  s.schedule = sv;
  s.directed_edges = static_cast<std::int64_t>(graph.directed_edge_count());
  s.broadcasting_agents = graph.broadcasting_agents();
  s.bits_sent = s.directed_edges * message_bits;
  s.bits_compressed = s.directed_edges * compressed_bits;
  s.bits_baseline = s.directed_edges * bit_cost(Compressor::identity(), dimension);
  return s;
}

}  // namespace

RoundResult compressed_round(NetworkState& state, EstimateRegistry& registry,
                             const RoundProblem& problem, const GraphRound& graph,
                             const MixingMatrix& mixing, const Schedule& schedule,
                             const Compressor& compressor, std::span<Rng> dither,
                             const RoundOptions& options) {
  check_inputs(state, problem, graph, mixing);
  const int n = problem.agents();
  const int p = problem.dimension();
  const BoxSet& box = problem.box();
  const ScheduleValues sv = schedule.at(state.round);
  check_schedule(sv);
  if (compressor.stochastic()) {
    require(static_cast<int>(dither.size()) == n, ErrorCode::kPrecondition,
            "stochastic compressor needs one dither stream per agent");
  }

  const std::int64_t cost = bit_cost(compressor, p);
  RoundResult out;
  out.summary = make_summary(graph, sv, p, cost, cost);
  out.summary.t = state.round;

  std::vector<std::vector<int>> receivers(n);
  if (registry.mode() == EstimateMode::kPerReader) {
    for (const Edge& e : graph.edges()) receivers[e.from].push_back(e.to);
  }

  // (a) every agent emits one message; estimates advance before any mixing.
  std::vector<CompressedMessage> messages;
  for (int j = 0; j < n; ++j) {
    const Vector& z = state.agents[j].primal;
    if (compressor.lossless()) {
      // P_X(zhat + s (z - zhat) / s) = z exactly, without the rounding of the
      // scale/unscale arithmetic.
      registry.assign(j, project_box(z, box), receivers[j]);
      if (options.trace) messages.push_back(compress(compressor, z).message);
      continue;
    }
    const Vector scaled = (z - registry.canonical(j)) / sv.scale;
    Rng* stream = compressor.stochastic() ? &dither[j] : nullptr;
    Compression c = compress(compressor, scaled, stream);
    if (!c.message.fits && graph.out_degree(j) > 0) ++out.summary.overflow_messages;
    registry.advance(j, sv.scale * c.value, box, receivers[j]);
    if (options.trace) messages.push_back(std::move(c.message));
  }
  out.summary.estimate_gap = estimate_gap(state, &registry);

  // (b) mixing over in-neighbors and self.
  out.points.resize(n);
  for (int i = 0; i < n; ++i) {
    out.points[i] =
        mix(i, graph, mixing, box, [&](int j) -> const Vector& { return registry.view(i, j); });
  }

  // (c) dual, direction and primal steps.
  local_updates(state, problem, sv, out.points);

  out.infeasible = count_infeasible(state, out.points, box);
  for (int j = 0; j < n; ++j) {
    if (!box.contains(registry.canonical(j))) ++out.infeasible;
    if (registry.mode() == EstimateMode::kPerReader) {
      for (int i = 0; i < n; ++i) {
        if (i != j && !box.contains(registry.view(i, j))) ++out.infeasible;
      }
    }
  }
  if (options.trace) {
    RoundTrace tr{graph, out.points, {}, {}, {}, std::move(messages)};
    for (int i = 0; i < n; ++i) {
      tr.primal.push_back(state.agents[i].primal);
      tr.estimates.push_back(registry.canonical(i));
      tr.duals.push_back(state.agents[i].dual);
    }
    out.trace = std::move(tr);
  }
  state.round += 1;
  return out;
}

RoundResult baseline_round(NetworkState& state, const RoundProblem& problem,
                           const GraphRound& graph, const MixingMatrix& mixing,
                           const Schedule& schedule, const RoundOptions& options) {
  check_inputs(state, problem, graph, mixing);
  const int n = problem.agents();
  const int p = problem.dimension();
  const BoxSet& box = problem.box();
  const ScheduleValues sv = schedule.at(state.round);
  check_schedule(sv);

  const std::int64_t cost = bit_cost(Compressor::identity(), p);
  RoundResult out;
  out.summary = make_summary(graph, sv, p, cost, cost);
  out.summary.t = state.round;
  out.summary.estimate_gap = estimate_gap(state, nullptr);

  out.points.resize(n);
  for (int i = 0; i < n; ++i) {
    out.points[i] = mix(i, graph, mixing, box,
                        [&](int j) -> const Vector& { return state.agents[j].primal; });
  }
  // Snapshot of z_{j,t} for the trace before the primal step overwrites it.
  std::vector<Vector> mixed_values;
  if (options.trace) {
    for (const AgentState& a : state.agents) mixed_values.push_back(a.primal);
  }

  local_updates(state, problem, sv, out.points);
  out.infeasible = count_infeasible(state, out.points, box);

  if (options.trace) {
    RoundTrace tr{graph, out.points, {}, std::move(mixed_values), {}, {}};
    for (int i = 0; i < n; ++i) {
      tr.primal.push_back(state.agents[i].primal);
      tr.duals.push_back(state.agents[i].dual);
    }
    out.trace = std::move(tr);
  }
  state.round += 1;
  return out;
}

RunHistory run(const RoundProblem& problem, TopologySource& topology, const Schedule& schedule,
               const Compressor& compressor, Round horizon, const EngineOptions& options) {
  require(horizon >= 0, ErrorCode::kConfig, "horizon must be non-negative");
  if (horizon > problem.horizon()) {
    raise(ErrorCode::kConfig, "horizon exceeds the rounds materialized by the problem");
  }
  const int n = problem.agents();
  const int p = problem.dimension();

  RunHistory history;
  history.agents = n;
  history.dimension = p;
  history.stacked_constraints = problem.total_constraints();
  history.has_metrics = options.record_metrics;
  history.rounds.reserve(static_cast<std::size_t>(horizon));

  NetworkState state = initial_state(problem, options.initial);
  EstimateRegistry registry(n, p, options.estimates);
  std::vector<Rng> dither;
  if (compressor.stochastic()) {
    dither.reserve(n);
    for (int i = 0; i < n; ++i) dither.emplace_back(options.seed, Stream::kDither, i);
  }
  const RoundOptions round_options{options.trace};
  bool warned_floor = false;

  for (Round t = 1; t <= horizon; ++t) {
    RoundResult result;
    try {
      const GraphRound graph = topology.next(t);
      const MixingMatrix mixing = mixing_matrix(graph);
      if (options.algorithm == Algorithm::kCompressed) {
        result = compressed_round(state, registry, problem, graph, mixing, schedule, compressor,
                                  dither, round_options);
      } else {
        result = baseline_round(state, problem, graph, mixing, schedule, round_options);
      }
      if (options.record_metrics) {
        history.metrics.push_back(evaluate_round_metrics(problem, t, result.points));
      }
    } catch (const Error& e) {
      raise(e.code(), "round " + std::to_string(t) + ": " + e.what());
    }
    if (result.summary.schedule.scale_floored && !warned_floor) {
      history.warnings.push_back("round " + std::to_string(t) +
                                 ": scaling parameter underflowed and was floored at the "
                                 "smallest normal double");
      warned_floor = true;
    }
    if (result.summary.overflow_messages > 0 &&
        std::none_of(history.warnings.begin(), history.warnings.end(),
                     [](const std::string& w) { return w.find("q-bit") != std::string::npos; })) {
      history.warnings.push_back("round " + std::to_string(t) +
                                 ": lattice coordinates exceeded the q-bit range");
    }
    history.feasibility_violations += result.infeasible;
    history.rounds.push_back(result.summary);
    if (result.trace) history.traces.push_back(std::move(*result.trace));
  }
  for (const AgentState& a : state.agents) history.final_primal.push_back(a.primal);
  return history;
}

}  // namespace dopd
