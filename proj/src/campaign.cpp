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

#include "dopd/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "dopd/experiment.hpp"
#include "json.hpp"

namespace dopd {

namespace fs = std::filesystem;
using nlohmann::json;

Campaign parse_campaign(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::kParse, std::string("campaign: ") + e.what());
  }
  if (!doc.is_object()) raise(ErrorCode::kParse, "campaign must be an object");
  Campaign c;
  for (const auto& [key, value] : doc.items()) {
    if (key != "output_dir" && key != "seeds" && key != "runs") {
      raise(ErrorCode::kParse, "unknown key campaign." + key);
    }
  }
  try {
    if (doc.contains("output_dir")) c.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("seeds")) c.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
  } catch (const json::exception&) {
    raise(ErrorCode::kParse, "campaign.output_dir must be a string and seeds integers");
  }
  if (doc.contains("runs")) {
    if (!doc.at("runs").is_array()) raise(ErrorCode::kParse, "campaign.runs must be an array");
    for (const json& r : doc.at("runs")) c.runs.push_back(parse_run_config(r.dump()));
  }
  std::vector<std::string> names;
  for (const RunConfig& r : c.runs) names.push_back(r.name);
  std::sort(names.begin(), names.end());
  require(std::adjacent_find(names.begin(), names.end()) == names.end(), ErrorCode::kConfig,
          "campaign run names must be unique");
  return c;
}

Campaign load_campaign(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_campaign(text.str());
  } catch (const Error& e) {
    raise(e.code(), path + ": " + e.what());
  }
}

std::string serialize_campaign(const Campaign& campaign) {
  json runs = json::array();
  for (const RunConfig& r : campaign.runs) runs.push_back(json::parse(serialize_run_config(r)));
  json doc = {{"output_dir", campaign.output_dir}, {"seeds", campaign.seeds}, {"runs", runs}};
  return doc.dump(2);
}

Campaign preset_paper_experiment(PresetScale scale) {
  Campaign c;
  c.output_dir = scale == PresetScale::kFull ? "paper_full" : "paper_desk";
  c.seeds = {1, 2, 3};
  RunConfig base;
  base.problem.agents = scale == PresetScale::kFull ? 100 : 10;
  base.problem.dimension = 2;
  base.problem.constraints_per_agent = 2;
  base.problem.margin = 0.01;
  base.problem.box_half_width = 5.0;
  base.graph.kind = GraphKind::kSegmented;
  base.graph.rho = 0.1;
  base.graph.window = 4;
  base.compressor = {CompressorKind::kRound, 1, 8};
  base.schedule.theta1 = 0.5;
  base.schedule.theta2 = 1.0;
  base.schedule.mu = 0.9;
  base.schedule.s0 = 1.0;
  base.run.horizon = 4096;

  for (ScheduleFamily family : {ScheduleFamily::kPolynomial, ScheduleFamily::kGeometric}) {
    for (Algorithm algorithm : {Algorithm::kCompressed, Algorithm::kBaseline}) {
      RunConfig r = base;
      r.schedule.family = family;
      r.run.algorithm = algorithm;
      r.name = std::string(family == ScheduleFamily::kPolynomial ? "poly" : "geo") + "_" +
               to_string(algorithm);
      c.runs.push_back(r);
    }
  }
  RunConfig margin = base;
  margin.name = "poly_compressed_b0.5";
  margin.problem.margin = 0.5;
  c.runs.push_back(margin);
  return c;
}

bool CampaignReport::all_ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const CampaignRunResult& r) { return r.ok; });
}

namespace {

std::string run_file(const std::string& name, std::uint64_t seed) {
  return name + "_seed" + std::to_string(seed) + ".csv";
}

SummaryStat stat(const std::vector<double>& v) {
  SummaryStat s;
  if (v.empty()) {
    s.mean = s.min = s.max = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double total = 0.0;
  s.min = s.max = v.front();
  for (double x : v) {
    total += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = total / static_cast<double>(v.size());
  return s;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CampaignReport run_campaign(const Campaign& campaign, bool force, const LineSink& log) {
  auto say = [&](const std::string& line) {
    if (log) log(line);
  };
  for (const RunConfig& r : campaign.runs) validate(r);
  CampaignReport report;
  if (campaign.runs.empty()) return report;
  require(!campaign.seeds.empty(), ErrorCode::kConfig, "campaign needs at least one seed");

  const fs::path dir(campaign.output_dir);
  std::vector<fs::path> targets{dir / "summary.csv"};
  for (const RunConfig& r : campaign.runs) {
    for (std::uint64_t seed : campaign.seeds) targets.push_back(dir / run_file(r.name, seed));
  }
  if (!force) {
    for (const fs::path& p : targets) {
      if (fs::exists(p)) {
        raise(ErrorCode::kIo, p.string() + " exists; pass force to overwrite");
      }
    }
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) raise(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());

  for (const RunConfig& base : campaign.runs) {
    for (std::uint64_t seed : campaign.seeds) {
      CampaignRunResult result;
      result.name = base.name;
      result.seed = seed;
      result.csv_path = (dir / run_file(base.name, seed)).string();
      RunConfig cfg = base;
      cfg.run.seed = seed;
      try {
        const RunReport rr = execute_run(cfg);
        std::ofstream out(result.csv_path);
        if (!out) raise(ErrorCode::kIo, "cannot write " + result.csv_path);
        write_checkpoint_csv(out, rr.checkpoints);
        out.close();
        if (!out) raise(ErrorCode::kIo, "write failed for " + result.csv_path);
        if (!rr.checkpoints.empty()) result.final = rr.checkpoints.back();
        result.warnings = rr.warnings;
        result.feasibility_violations = rr.history.feasibility_violations;
        result.ok = rr.history.feasibility_violations == 0;
        if (!result.ok) result.error = "feasibility invariant violated";
      } catch (const Error& e) {
        result.error = std::string(to_string(e.code())) + ": " + e.what();
      } catch (const std::exception& e) {
        result.error = e.what();
      }
      say(result.name + " seed " + std::to_string(seed) + ": " +
          (result.ok ? "ok" : "FAILED (" + result.error + ")"));
      for (const std::string& w : result.warnings) say("  warning: " + w);
      report.runs.push_back(std::move(result));
    }
  }

  for (const RunConfig& base : campaign.runs) {
    CampaignSummaryRow row;
    row.name = base.name;
    std::vector<double> reg, ccv, bc, bb, sr, sc;
    for (const CampaignRunResult& r : report.runs) {
      if (r.name != base.name) continue;
      if (!r.ok || !r.final) {
        if (!r.ok) ++row.failed;
        continue;
      }
      ++row.completed;
      reg.push_back(r.final->net_regret);
      ccv.push_back(r.final->net_ccv);
      bc.push_back(static_cast<double>(r.final->bits_compressed));
      bb.push_back(static_cast<double>(r.final->bits_baseline));
      sr.push_back(r.final->slope_regret);
      sc.push_back(r.final->slope_ccv);
    }
    row.net_regret = stat(reg);
    row.net_ccv = stat(ccv);
    row.bits_compressed = stat(bc);
    row.bits_baseline = stat(bb);
    row.slope_regret = stat(sr);
    row.slope_ccv = stat(sc);
    report.summary.push_back(row);
  }

  report.summary_path = (dir / "summary.csv").string();
  std::ofstream out(report.summary_path);
  if (!out) raise(ErrorCode::kIo, "cannot write " + report.summary_path);
  out << "name,completed,failed";
  for (const char* m : {"NetReg", "NetCCV", "bits_compressed", "bits_baseline", "slope_reg",
                        "slope_ccv"}) {
    out << ',' << m << "_mean," << m << "_min," << m << "_max";
  }
  out << '\n';
  for (const CampaignSummaryRow& r : report.summary) {
    out << r.name << ',' << r.completed << ',' << r.failed;
    for (const SummaryStat* s : {&r.net_regret, &r.net_ccv, &r.bits_compressed,
                                 &r.bits_baseline, &r.slope_regret, &r.slope_ccv}) {
      out << ',' << fmt(s->mean) << ',' << fmt(s->min) << ',' << fmt(s->max);
    }
    out << '\n';
  }
  return report;
}

}  // namespace dopd
