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

#include <iosfwd>
#include <string>
#include <vector>

#include "dopd/config.hpp"
#include "dopd/history.hpp"
#include "dopd/metrics.hpp"
#include "dopd/problem.hpp"

namespace dopd {

// Instance for the config: read from problem.instance_file when set,
// generated from run.seed otherwise.
LocalizationInstance build_instance(const RunConfig& config);

struct RunReport {
  RunConfig config;
  RunHistory history;
  std::vector<CheckpointMetrics> checkpoints;
  ProblemBounds bounds;
  double alpha0 = 0.0;  // resolved
  double gamma0 = 0.0;  // resolved
  // Windows of B consecutive graphs whose union was not strongly connected.
  std::int64_t disconnected_windows = 0;
  std::vector<std::string> warnings;
};

RunReport execute_run(const RunConfig& config);

// Header T,NetReg,NetCCV,bits_compressed,bits_baseline,slope_reg_so_far,
// slope_ccv_so_far; floats as %.17g, "nan" where undefined.
void write_checkpoint_csv(std::ostream& out, const std::vector<CheckpointMetrics>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Index of a named column; kParse when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

// Trace writers; kUnavailable unless the run was traced.
void write_edge_trace(std::ostream& out, const RunHistory& history);
void write_message_trace(std::ostream& out, const RunHistory& history,
                         const Compressor& compressor);
// "t agent x... z... zhat... v..." per agent and round.
void write_state_trace(std::ostream& out, const RunHistory& history);

// Per-round scalars: t, directed edges, broadcasting agents, bits, schedule
// values, estimate gap.
void write_round_log(std::ostream& out, const RunHistory& history);

}  // namespace dopd
