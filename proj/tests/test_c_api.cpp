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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dopd/dopd.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dopd_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void collect(const char* line, void* user) {
  static_cast<std::vector<std::string>*>(user)->push_back(line);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = R"({"name": "capi", "problem": {"n": 5}, "run": {"T": 128}})";

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(dopd_version()).size() > 0);
  CHECK(std::string(dopd_status_name(DOPD_OK)) != std::string(dopd_status_name(DOPD_ERR_PARSE)));
}

TEST_CASE("null arguments are rejected") {
  CHECK(dopd_config_parse(nullptr, nullptr) == DOPD_ERR_ARGUMENT);
  dopd_config* config = nullptr;
  CHECK(dopd_config_parse(nullptr, &config) == DOPD_ERR_ARGUMENT);
  CHECK(config == nullptr);
  CHECK(dopd_run_execute(nullptr, nullptr) == DOPD_ERR_ARGUMENT);
  size_t count = 0;
  CHECK(dopd_run_checkpoint_count(nullptr, &count) == DOPD_ERR_ARGUMENT);
  CHECK(dopd_config_set_seed(nullptr, 3) == DOPD_ERR_ARGUMENT);
  dopd_config_free(nullptr);
  dopd_run_free(nullptr);
  dopd_campaign_free(nullptr);
}

TEST_CASE("parse errors set the last error") {
  dopd_config* config = nullptr;
  CHECK(dopd_config_parse(R"({"bogus": 1})", &config) == DOPD_ERR_PARSE);
  CHECK(config == nullptr);
  CHECK(std::string(dopd_last_error()).find("bogus") != std::string::npos);
  CHECK(dopd_config_parse(R"({"graph": {"rho": 3}})", &config) == DOPD_ERR_CONFIG);
  CHECK(dopd_config_load("/nonexistent.json", &config) == DOPD_ERR_IO);
}

TEST_CASE("serialize reports the needed size") {
  dopd_config* config = nullptr;
  REQUIRE(dopd_config_parse(kSmall, &config) == DOPD_OK);
  size_t needed = 0;
  CHECK(dopd_config_serialize(config, nullptr, 0, &needed) == DOPD_OK);
  REQUIRE(needed > 1);
  std::vector<char> text(needed);
  CHECK(dopd_config_serialize(config, text.data(), text.size(), &needed) == DOPD_OK);
  CHECK(std::string(text.data()).size() + 1 == needed);
  dopd_config* again = nullptr;
  CHECK(dopd_config_parse(text.data(), &again) == DOPD_OK);
  dopd_config_free(again);
  dopd_config_free(config);
}

TEST_CASE("runs expose checkpoints, diagnostics and outputs") {
  const fs::path dir = fresh_dir("run");
  dopd_config* config = nullptr;
  REQUIRE(dopd_config_parse(kSmall, &config) == DOPD_OK);
  CHECK(dopd_config_set_trace(config, 1) == DOPD_OK);
  dopd_run* run = nullptr;
  REQUIRE(dopd_run_execute(config, &run) == DOPD_OK);

  size_t count = 0;
  REQUIRE(dopd_run_checkpoint_count(run, &count) == DOPD_OK);
  CHECK(count == 3);
  dopd_checkpoint cp{};
  CHECK(dopd_run_checkpoint(run, count - 1, &cp) == DOPD_OK);
  CHECK(cp.t == 128);
  CHECK(cp.bits_compressed * 8 == cp.bits_baseline);
  CHECK(std::isfinite(cp.net_regret));
  CHECK(dopd_run_checkpoint(run, count, &cp) == DOPD_ERR_INDEX);

  dopd_diagnostics diag{};
  CHECK(dopd_run_diagnostics(run, &diag) == DOPD_OK);
  CHECK(diag.rounds == 128);
  CHECK(diag.feasibility_violations == 0);
  CHECK(diag.alpha0 == 0.3);
  CHECK(diag.gamma0 > 0.0);

  size_t needed = 0;
  CHECK(dopd_run_final_primal(run, nullptr, 0, &needed) == DOPD_OK);
  CHECK(needed == 10);
  std::vector<double> primal(needed);
  CHECK(dopd_run_final_primal(run, primal.data(), primal.size(), &needed) == DOPD_OK);
  for (double v : primal) CHECK(std::abs(v) <= 5.0);

  CHECK(dopd_run_write_csv(run, (dir / "run.csv").c_str()) == DOPD_OK);
  CHECK(dopd_run_write_rounds(run, (dir / "rounds.txt").c_str()) == DOPD_OK);
  CHECK(dopd_run_write_edge_trace(run, (dir / "edges.txt").c_str()) == DOPD_OK);
  CHECK(dopd_run_write_message_trace(run, (dir / "messages.txt").c_str()) == DOPD_OK);
  CHECK(dopd_run_write_state_trace(run, (dir / "states.txt").c_str()) == DOPD_OK);
  CHECK(slurp(dir / "run.csv").rfind("T,NetReg,NetCCV", 0) == 0);
  CHECK_FALSE(slurp(dir / "edges.txt").empty());

  std::vector<std::string> lines;
  CHECK(dopd_slopes_from_csv((dir / "run.csv").c_str(), collect, &lines) == DOPD_ERR_PRECONDITION);
  CHECK(dopd_slopes_from_csv((dir / "missing.csv").c_str(), collect, &lines) == DOPD_ERR_IO);

  dopd_run_free(run);
  dopd_config_free(config);
}

TEST_CASE("slopes need at least four checkpoints") {
  const fs::path dir = fresh_dir("slopes");
  dopd_config* config = nullptr;
  REQUIRE(dopd_config_parse(R"({"problem": {"n": 5}, "run": {"T": 512}})", &config) == DOPD_OK);
  dopd_run* run = nullptr;
  REQUIRE(dopd_run_execute(config, &run) == DOPD_OK);
  REQUIRE(dopd_run_write_csv(run, (dir / "run.csv").c_str()) == DOPD_OK);
  std::vector<std::string> lines;
  CHECK(dopd_slopes_from_csv((dir / "run.csv").c_str(), collect, &lines) == DOPD_OK);
  CHECK_FALSE(lines.empty());
  dopd_run_free(run);
  dopd_config_free(config);
}

TEST_CASE("untraced runs cannot write traces") {
  dopd_config* config = nullptr;
  REQUIRE(dopd_config_parse(kSmall, &config) == DOPD_OK);
  dopd_run* run = nullptr;
  REQUIRE(dopd_run_execute(config, &run) == DOPD_OK);
  const fs::path dir = fresh_dir("untraced");
  CHECK(dopd_run_write_edge_trace(run, (dir / "e.txt").c_str()) == DOPD_ERR_UNAVAILABLE);
  dopd_run_free(run);
  dopd_config_free(config);
}

TEST_CASE("same seed, same numbers") {
  dopd_config* config = nullptr;
  REQUIRE(dopd_config_parse(kSmall, &config) == DOPD_OK);
  CHECK(dopd_config_set_seed(config, 7) == DOPD_OK);
  dopd_run *a = nullptr, *b = nullptr;
  REQUIRE(dopd_run_execute(config, &a) == DOPD_OK);
  REQUIRE(dopd_run_execute(config, &b) == DOPD_OK);
  dopd_checkpoint ca{}, cb{};
  dopd_run_checkpoint(a, 2, &ca);
  dopd_run_checkpoint(b, 2, &cb);
  CHECK(ca.net_regret == cb.net_regret);
  CHECK(ca.net_ccv == cb.net_ccv);
  dopd_run_free(a);
  dopd_run_free(b);
  dopd_config_free(config);
}

TEST_CASE("campaigns through the C interface") {
  const fs::path dir = fresh_dir("campaign");
  dopd_campaign* preset = nullptr;
  REQUIRE(dopd_campaign_preset_paper(1, &preset) == DOPD_OK);
  CHECK(dopd_campaign_write(preset, (dir / "preset.json").c_str()) == DOPD_OK);
  dopd_campaign* loaded = nullptr;
  CHECK(dopd_campaign_load((dir / "preset.json").c_str(), &loaded) == DOPD_OK);
  dopd_campaign_free(loaded);
  dopd_campaign_free(preset);

  {
    std::ofstream out(dir / "small.json");
    out << R"({"output_dir": "x", "seeds": [1, 2],
               "runs": [{"name": "a", "problem": {"n": 4}, "run": {"T": 64}}]})";
  }
  dopd_campaign* campaign = nullptr;
  REQUIRE(dopd_campaign_load((dir / "small.json").c_str(), &campaign) == DOPD_OK);
  CHECK(dopd_campaign_set_output_dir(campaign, (dir / "out").c_str()) == DOPD_OK);
  std::vector<std::string> lines;
  CHECK(dopd_campaign_run(campaign, 0, collect, &lines) == DOPD_OK);
  CHECK(fs::exists(dir / "out" / "a_seed1.csv"));
  CHECK(fs::exists(dir / "out" / "a_seed2.csv"));
  CHECK(fs::exists(dir / "out" / "summary.csv"));
  CHECK(dopd_campaign_run(campaign, 0, collect, &lines) == DOPD_ERR_IO);
  CHECK(dopd_campaign_set_seed(campaign, 5) == DOPD_OK);
  CHECK(dopd_campaign_run(campaign, 1, collect, &lines) == DOPD_OK);
  CHECK(fs::exists(dir / "out" / "a_seed5.csv"));
  dopd_campaign_free(campaign);
}

TEST_CASE("failed campaign runs surface as DOPD_ERR_FAILED") {
  const fs::path dir = fresh_dir("failed");
  {
    std::ofstream out(dir / "bad.json");
    out << R"({"output_dir": "x", "seeds": [1],
               "runs": [{"name": "a", "problem": {"n": 4, "instance_file": "/nonexistent"},
                         "run": {"T": 64}}]})";
  }
  dopd_campaign* campaign = nullptr;
  REQUIRE(dopd_campaign_load((dir / "bad.json").c_str(), &campaign) == DOPD_OK);
  dopd_campaign_set_output_dir(campaign, (dir / "out").c_str());
  CHECK(dopd_campaign_run(campaign, 0, nullptr, nullptr) == DOPD_ERR_FAILED);
  CHECK(fs::exists(dir / "out" / "summary.csv"));
  dopd_campaign_free(campaign);
}

TEST_CASE("verify reports one line per property") {
  std::vector<std::string> lines;
  CHECK(dopd_verify(1, collect, &lines) == DOPD_OK);
  CHECK(lines.size() >= 9);
  for (const std::string& line : lines) CHECK(line.rfind("PASS", 0) == 0);
  CHECK(dopd_verify(1, nullptr, nullptr) == DOPD_OK);
}
