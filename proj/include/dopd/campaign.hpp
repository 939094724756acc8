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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dopd/config.hpp"
#include "dopd/metrics.hpp"

namespace dopd {

struct Campaign {
  std::string output_dir = "out";
  std::vector<std::uint64_t> seeds{1};
  std::vector<RunConfig> runs;  // run.seed is replaced by each campaign seed
};

// {"output_dir": ..., "seeds": [...], "runs": [<run config>, ...]}
Campaign parse_campaign(std::string_view text);
Campaign load_campaign(const std::string& path);
std::string serialize_campaign(const Campaign& campaign);

enum class PresetScale {
  kFull,  // n = 100
  kDesk,  // n = 10
};

// Polynomial and geometric schedules, each compressed (Delta = 1, q = 8) and
// uncompressed, at b = 0.01, plus a compressed polynomial run at b = 0.5 for
// the margin comparison. rho = 0.1, p = 2, m_i = 2, T = 4096, seeds 1..3.
Campaign preset_paper_experiment(PresetScale scale);

struct CampaignRunResult {
  std::string name;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::string csv_path;
  std::optional<CheckpointMetrics> final;
  std::vector<std::string> warnings;
  std::int64_t feasibility_violations = 0;
};

struct SummaryStat {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct CampaignSummaryRow {
  std::string name;
  int completed = 0;
  int failed = 0;
  SummaryStat net_regret, net_ccv, bits_compressed, bits_baseline, slope_regret, slope_ccv;
};

struct CampaignReport {
  std::vector<CampaignRunResult> runs;
  std::vector<CampaignSummaryRow> summary;
  std::string summary_path;

  bool all_ok() const;
};

using LineSink = std::function<void(const std::string&)>;

// Validates every config first, refuses to overwrite outputs unless `force`,
// then runs each (config, seed) pair. A failing run is recorded and the
// campaign continues.
CampaignReport run_campaign(const Campaign& campaign, bool force, const LineSink& log = {});

}  // namespace dopd
