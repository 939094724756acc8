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

#include "dopd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include "dopd/engine.hpp"
#include "dopd/graph.hpp"

namespace dopd {

LocalizationInstance build_instance(const RunConfig& config) {
  const ProblemBlock& p = config.problem;
  if (!p.instance_file.empty()) {
    std::ifstream in(p.instance_file);
    if (!in) raise(ErrorCode::kIo, "cannot open " + p.instance_file);
    LocalizationInstance instance = read_instance(in);
    require(instance.agents() == p.agents && instance.dimension() == p.dimension,
            ErrorCode::kConfig, "instance file does not match problem.n / problem.p");
    require(instance.horizon() >= config.run.horizon, ErrorCode::kConfig,
            "instance file holds fewer rounds than run.T");
    return instance;
  }
  LocalizationConfig lc;
  lc.agents = p.agents;
  lc.dimension = p.dimension;
  lc.constraints_per_agent = p.constraints_per_agent;
  lc.margin = p.margin;
  lc.box_half_width = p.box_half_width;
  lc.horizon = config.run.horizon;
  lc.seed = config.run.seed;
  lc.allow_no_slater = p.no_slater;
  return generate_instance(lc);
}

namespace {

// Forwards another source and counts B-windows whose union graph is not
// strongly connected.
class CheckedTopology final : public TopologySource {
 public:
  CheckedTopology(TopologySource& inner, int window) : inner_(inner), window_(window) {}

  GraphRound next(Round t) override {
    GraphRound g = inner_.next(t);
    recent_.push_back(g);
    if (static_cast<int>(recent_.size()) > window_) recent_.pop_front();
    if (static_cast<int>(recent_.size()) == window_) {
      std::vector<GraphRound> w(recent_.begin(), recent_.end());
      if (!check_b_connectivity(w)) ++disconnected_;
    }
    return g;
  }

  std::int64_t disconnected() const { return disconnected_; }

 private:
  TopologySource& inner_;
  int window_;
  std::deque<GraphRound> recent_;
  std::int64_t disconnected_ = 0;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_traces(const RunHistory& history) {
  if (history.traces.size() != history.rounds.size() || history.rounds.empty()) {
    raise(ErrorCode::kUnavailable, "trace unavailable: run without the trace flag");
  }
}

}  // namespace

RunReport execute_run(const RunConfig& config) {
  validate(config);
  RunReport report;
  report.config = config;
  LocalizationProblem problem(build_instance(config));
  report.bounds = problem.bounds();

  const ScheduleBlock& sb = config.schedule;
  const double g2 = report.bounds.jacobian_bound_spectral;
  report.alpha0 = sb.alpha0.value_or(default_alpha0(sb.family));
  report.gamma0 =
      sb.gamma0.value_or(std::min(g2 > 0.0 ? 1.0 / (4.0 * g2 * g2) : kGammaCap, kGammaCap));
  const Schedule schedule =
      sb.family == ScheduleFamily::kPolynomial
          ? Schedule::polynomial(report.alpha0, report.gamma0, sb.s0, sb.theta1, sb.theta2)
          : Schedule::geometric(report.alpha0, report.gamma0, sb.s0, sb.mu);
  schedule.validate_against(g2);

  const int n = config.problem.agents;
  std::unique_ptr<TopologySource> base;
  if (config.graph.kind == GraphKind::kSegmented) {
    base = std::make_unique<SegmentTopology>(n, config.graph.rho, config.run.seed);
  } else {
    base = std::make_unique<StaticTopology>(complete_graph(n, 1));
  }
  CheckedTopology topology(*base, config.graph.window);

  EngineOptions options;
  options.algorithm = config.run.algorithm;
  options.estimates = config.run.estimates;
  options.trace = config.run.trace;
  options.record_metrics = config.run.metrics;
  options.seed = config.run.seed;
  const Compressor compressor = make_compressor(config.compressor);
  report.history = run(problem, topology, schedule, compressor, config.run.horizon, options);
  report.disconnected_windows = topology.disconnected();

  if (config.run.metrics && config.run.horizon > 0) {
    const std::vector<Round> cps = config.run.checkpoints.empty()
                                       ? default_checkpoints(config.run.horizon)
                                       : config.run.checkpoints;
    report.checkpoints = evaluate_checkpoints(problem, report.history, cps);
  }
  report.warnings = report.history.warnings;
  if (report.disconnected_windows > 0) {
    report.warnings.push_back(std::to_string(report.disconnected_windows) +
                              " windows of B graphs had a disconnected union");
  }
  if (report.history.feasibility_violations > 0) {
    report.warnings.push_back(std::to_string(report.history.feasibility_violations) +
                              " recorded states left X or had negative duals");
  }
  return report;
}

void write_checkpoint_csv(std::ostream& out, const std::vector<CheckpointMetrics>& rows) {
  out << "T,NetReg,NetCCV,bits_compressed,bits_baseline,slope_reg_so_far,slope_ccv_so_far\n";
  for (const CheckpointMetrics& r : rows) {
    out << r.t << ',' << format_double(r.net_regret) << ',' << format_double(r.net_ccv) << ','
        << r.bits_compressed << ',' << r.bits_baseline << ',' << format_double(r.slope_regret)
        << ',' << format_double(r.slope_ccv) << '\n';
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) raise(ErrorCode::kParse, "missing CSV column " + name);
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) raise(ErrorCode::kParse, "empty CSV");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != table.header.size()) raise(ErrorCode::kParse, "ragged CSV row: " + line);
    std::vector<double> row;
    for (const std::string& c : cells) {
      if (c == "nan") {
        row.push_back(std::nan(""));
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') raise(ErrorCode::kParse, "bad CSV number: " + c);
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_edge_trace(std::ostream& out, const RunHistory& history) {
  require_traces(history);
  for (const RoundTrace& tr : history.traces) write_edge_trace(out, tr.graph);
}

void write_message_trace(std::ostream& out, const RunHistory& history,
                         const Compressor& compressor) {
  require_traces(history);
  for (const RoundTrace& tr : history.traces) {
    for (std::size_t j = 0; j < tr.messages.size(); ++j) {
      if (tr.graph.out_degree(static_cast<int>(j)) == 0) continue;
      write_message_record(out, tr.graph.round(), static_cast<int>(j), compressor,
                           tr.messages[j]);
    }
  }
}

void write_state_trace(std::ostream& out, const RunHistory& history) {
  require_traces(history);
  auto put = [&](const Vector& v) {
    for (double x : v) out << ' ' << format_double(x);
  };
  for (const RoundTrace& tr : history.traces) {
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
      out << tr.graph.round() << ' ' << i;
      put(tr.points[i]);
      put(tr.primal[i]);
      if (i < tr.estimates.size()) put(tr.estimates[i]);
      put(tr.duals[i]);
      out << '\n';
    }
  }
}

void write_round_log(std::ostream& out, const RunHistory& history) {
  out << "t,directed_edges,broadcasting_agents,bits_sent,bits_compressed,bits_baseline,"
         "alpha,gamma,s,estimate_gap\n";
  for (const RoundSummary& s : history.rounds) {
    out << s.t << ',' << s.directed_edges << ',' << s.broadcasting_agents << ',' << s.bits_sent
        << ',' << s.bits_compressed << ',' << s.bits_baseline << ','
        << format_double(s.schedule.step) << ',' << format_double(s.schedule.regularization)
        << ',' << format_double(s.schedule.scale) << ',' << format_double(s.estimate_gap)
        << '\n';
  }
}

}  // namespace dopd
