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

// Command-line front end. Talks to the simulator only through dopd/dopd.h.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dopd/dopd.h"

namespace fs = std::filesystem;

namespace {

void print_line(const char* line, void*) { std::printf("%s\n", line); }

int report(dopd_status status, const std::string& what) {
  if (status == DOPD_OK) return 0;
  std::fprintf(stderr, "dopd: %s: %s: %s\n", what.c_str(), dopd_status_name(status),
               dopd_last_error());
  return status == DOPD_ERR_FAILED ? 1 : 2;
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct RunArgs {
  std::string config;
  std::string out;
  long long seed = -1;
  bool trace = false;
  bool force = false;
};

int command_run(const RunArgs& a) {
  dopd_config* config = nullptr;
  if (int rc = report(dopd_config_load(a.config.c_str(), &config), a.config)) return rc;
  if (a.seed >= 0) dopd_config_set_seed(config, static_cast<uint64_t>(a.seed));
  if (a.trace) dopd_config_set_trace(config, 1);

  const std::string stem = fs::path(a.config).stem().string();
  std::vector<std::pair<std::string, dopd_status (*)(const dopd_run*, const char*)>> outputs;
  if (!a.out.empty()) {
    outputs.emplace_back(stem + ".csv", dopd_run_write_csv);
    outputs.emplace_back(stem + "_rounds.csv", dopd_run_write_rounds);
    if (a.trace) {
      outputs.emplace_back(stem + "_edges.txt", dopd_run_write_edge_trace);
      outputs.emplace_back(stem + "_messages.txt", dopd_run_write_message_trace);
      outputs.emplace_back(stem + "_states.txt", dopd_run_write_state_trace);
    }
    for (const auto& [name, fn] : outputs) {
      if (!a.force && fs::exists(fs::path(a.out) / name)) {
        std::fprintf(stderr, "dopd: %s exists; pass --force to overwrite\n",
                     (fs::path(a.out) / name).c_str());
        dopd_config_free(config);
        return 2;
      }
    }
    std::error_code ec;
    fs::create_directories(a.out, ec);
  }

  dopd_run* run = nullptr;
  int rc = report(dopd_run_execute(config, &run), a.config);
  dopd_config_free(config);
  if (rc != 0) return rc;

  size_t count = 0;
  dopd_run_checkpoint_count(run, &count);
  std::printf("%8s %14s %14s %14s %14s %9s %9s\n", "T", "NetReg", "NetCCV", "bits_comp",
              "bits_base", "slope_reg", "slope_ccv");
  for (size_t k = 0; k < count; ++k) {
    dopd_checkpoint c;
    dopd_run_checkpoint(run, k, &c);
    std::printf("%8lld %14.6g %14.6g %14lld %14lld %9s %9s\n", static_cast<long long>(c.t),
                c.net_regret, c.net_ccv, static_cast<long long>(c.bits_compressed),
                static_cast<long long>(c.bits_baseline), format(c.slope_regret).c_str(),
                format(c.slope_ccv).c_str());
  }
  dopd_diagnostics d;
  dopd_run_diagnostics(run, &d);
  std::printf("alpha0 %.6g gamma0 %.6g G1 %.6g G2 %.6g L %.6g\n", d.alpha0, d.gamma0,
              d.gradient_bound, d.jacobian_bound, d.lipschitz);
  for (size_t k = 0; k < static_cast<size_t>(d.warnings); ++k) {
    const char* text = nullptr;
    dopd_run_warning(run, k, &text);
    std::fprintf(stderr, "warning: %s\n", text);
  }
  for (const auto& [name, fn] : outputs) {
    const std::string path = (fs::path(a.out) / name).string();
    if ((rc = report(fn(run, path.c_str()), path)) != 0) break;
  }
  if (rc == 0 && d.feasibility_violations > 0) {
    std::fprintf(stderr, "dopd: %lld feasibility violations\n",
                 static_cast<long long>(d.feasibility_violations));
    rc = 1;
  }
  dopd_run_free(run);
  return rc;
}

struct CampaignArgs {
  std::string file;
  std::string out;
  std::string write;
  long long seed = -1;
  bool desk = false;
  bool force = false;
};

int run_campaign(dopd_campaign* campaign, const CampaignArgs& a) {
  if (!a.out.empty()) dopd_campaign_set_output_dir(campaign, a.out.c_str());
  if (a.seed >= 0) dopd_campaign_set_seed(campaign, static_cast<uint64_t>(a.seed));
  int rc = 0;
  if (!a.write.empty()) {
    rc = report(dopd_campaign_write(campaign, a.write.c_str()), a.write);
  } else {
    rc = report(dopd_campaign_run(campaign, a.force ? 1 : 0, print_line, nullptr), "campaign");
  }
  dopd_campaign_free(campaign);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed online primal-dual optimization with compressed communication"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dopd_version());

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Execute one run config and report checkpoints");
  run->add_option("config", run_args.config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", run_args.seed, "Override run.seed");
  run->add_option("--out", run_args.out, "Directory for CSV and trace files");
  run->add_flag("--trace", run_args.trace, "Record full per-agent traces");
  run->add_flag("--force", run_args.force, "Overwrite existing outputs");

  CampaignArgs camp_args;
  CLI::App* campaign = app.add_subcommand("campaign", "Execute every run and seed of a campaign");
  campaign->add_option("file", camp_args.file, "Campaign file (JSON)")->required()->check(CLI::ExistingFile);
  campaign->add_option("--seed", camp_args.seed, "Run a single seed instead of the list");
  campaign->add_option("--out", camp_args.out, "Output directory");
  campaign->add_flag("--force", camp_args.force, "Overwrite existing outputs");

  CampaignArgs preset_args;
  std::string preset_name;
  CLI::App* preset = app.add_subcommand("preset", "Run a built-in campaign");
  preset->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember({"paper"}));
  preset->add_flag("--desk", preset_args.desk, "n = 10 instead of n = 100");
  preset->add_option("--seed", preset_args.seed, "Run a single seed instead of 1..3");
  preset->add_option("--out", preset_args.out, "Output directory");
  preset->add_option("--write", preset_args.write, "Write the campaign file instead of running");
  preset->add_flag("--force", preset_args.force, "Overwrite existing outputs");

  long long verify_seed = 1;
  CLI::App* verify = app.add_subcommand("verify", "Run the property suite");
  verify->add_option("--seed", verify_seed, "Seed for sampled properties");

  std::vector<std::string> csvs;
  CLI::App* slopes = app.add_subcommand("slopes", "Fit log-log growth slopes to run CSVs");
  slopes->add_option("csv", csvs, "Checkpoint CSV files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*run) return command_run(run_args);
  if (*campaign) {
    dopd_campaign* c = nullptr;
    if (int rc = report(dopd_campaign_load(camp_args.file.c_str(), &c), camp_args.file)) return rc;
    return run_campaign(c, camp_args);
  }
  if (*preset) {
    dopd_campaign* c = nullptr;
    if (int rc = report(dopd_campaign_preset_paper(preset_args.desk ? 1 : 0, &c), "preset")) {
      return rc;
    }
    return run_campaign(c, preset_args);
  }
  if (*verify) {
    return report(dopd_verify(static_cast<uint64_t>(verify_seed), print_line, nullptr), "verify");
  }
  int rc = 0;
  for (const std::string& path : csvs) {
    rc = std::max(rc, report(dopd_slopes_from_csv(path.c_str(), print_line, nullptr), path));
  }
  return rc;
}
