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

#include "dopd/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dopd {

using nlohmann::json;

const char* to_string(GraphKind kind) { return kind == GraphKind::kSegmented ? "segmented" : "complete"; }

double default_alpha0(ScheduleFamily family) {
  return family == ScheduleFamily::kPolynomial ? kPolynomialAlpha0 : kGeometricAlpha0;
}

void validate(const RunConfig& c) {
  const ProblemBlock& p = c.problem;
  require(!c.name.empty(), ErrorCode::kConfig, "run name must not be empty");
  require(c.name.find_first_of("/\\ ") == std::string::npos, ErrorCode::kConfig,
          "run name must not contain path separators or spaces");
  require(p.agents >= 2, ErrorCode::kConfig, "problem.n must be at least 2");
  require(p.dimension >= 1, ErrorCode::kConfig, "problem.p must be positive");
  require(p.constraints_per_agent >= 1, ErrorCode::kConfig, "problem.m_i must be positive");
  require(std::isfinite(p.margin) && p.margin >= 0.0, ErrorCode::kConfig,
          "problem.b must be finite and non-negative");
  require(p.margin > 0.0 || p.no_slater, ErrorCode::kConfig,
          "problem.b must be positive unless no_slater is set");
  require(std::isfinite(p.box_half_width) && p.box_half_width > 0.0, ErrorCode::kConfig,
          "problem.box must be positive");
  require(c.graph.rho >= 0.0 && c.graph.rho <= 1.0, ErrorCode::kConfig,
          "graph.rho must lie in [0, 1]");
  require(c.graph.window >= 1, ErrorCode::kConfig, "graph.B must be positive");
  if (c.compressor.kind != CompressorKind::kIdentity) {
    require(c.compressor.delta >= 1, ErrorCode::kConfig, "compressor.delta must be positive");
    require(c.compressor.bits >= 2 && c.compressor.bits <= 64, ErrorCode::kConfig,
            "compressor.q must lie in [2, 64]");
  }
  const ScheduleBlock& s = c.schedule;
  if (s.alpha0) {
    require(std::isfinite(*s.alpha0) && *s.alpha0 > 0.0, ErrorCode::kConfig,
            "schedule.alpha0 must be positive");
  }
  if (s.gamma0) {
    require(std::isfinite(*s.gamma0) && *s.gamma0 > 0.0, ErrorCode::kConfig,
            "schedule.gamma0 must be positive");
  }
  // Family-specific ranges are checked by the schedule factories.
  if (s.family == ScheduleFamily::kPolynomial) {
    Schedule::polynomial(1.0, 1.0, s.s0, s.theta1, s.theta2);
  } else {
    Schedule::geometric(1.0, 1.0, s.s0, s.mu);
  }
  require(c.run.horizon >= 0, ErrorCode::kConfig, "run.T must be non-negative");
  for (std::size_t k = 0; k < c.run.checkpoints.size(); ++k) {
    const Round t = c.run.checkpoints[k];
    require(t >= 1 && t <= c.run.horizon, ErrorCode::kConfig,
            "run.checkpoints must lie in [1, T]");
    require(k == 0 || t > c.run.checkpoints[k - 1], ErrorCode::kConfig,
            "run.checkpoints must be strictly increasing");
  }
  require(c.run.metrics || c.run.checkpoints.empty(), ErrorCode::kConfig,
          "run.checkpoints need run.metrics");
}

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> keys) {
  if (!obj.is_object()) raise(ErrorCode::kParse, where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) raise(ErrorCode::kParse, "unknown key " + where + "." + key);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    raise(ErrorCode::kParse, "bad value for " + where + "." + key);
  }
}

template <class E>
E read_enum(const json& obj, const char* key, E fallback, const std::string& where,
            std::initializer_list<std::pair<const char*, E>> names) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) raise(ErrorCode::kParse, where + "." + key + " must be a string");
  const std::string value = it->get<std::string>();
  for (const auto& [name, e] : names) {
    if (value == name) return e;
  }
  raise(ErrorCode::kParse, "unknown " + where + "." + key + " '" + value + "'");
}

// "auto" or absent leaves the optional empty.
void read_optional(const json& obj, const char* key, std::optional<double>& out,
                   const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (it->is_string() && it->get<std::string>() == "auto") {
    out.reset();
    return;
  }
  if (!it->is_number()) raise(ErrorCode::kParse, where + "." + key + " must be a number or auto");
  out = it->get<double>();
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json("auto");
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::kParse, std::string("run config: ") + e.what());
  }
  reject_unknown(doc, "config", {"name", "problem", "graph", "compressor", "schedule", "run"});
  RunConfig c;
  read(doc, "name", c.name, "config");

  if (auto it = doc.find("problem"); it != doc.end()) {
    const json& j = *it;
    reject_unknown(j, "problem",
                   {"kind", "n", "p", "m_i", "b", "box", "no_slater", "instance_file"});
    const std::string kind = j.value("kind", std::string("localization"));
    if (kind != "localization") raise(ErrorCode::kParse, "unknown problem.kind '" + kind + "'");
    read(j, "n", c.problem.agents, "problem");
    read(j, "p", c.problem.dimension, "problem");
    read(j, "m_i", c.problem.constraints_per_agent, "problem");
    read(j, "b", c.problem.margin, "problem");
    read(j, "box", c.problem.box_half_width, "problem");
    read(j, "no_slater", c.problem.no_slater, "problem");
    read(j, "instance_file", c.problem.instance_file, "problem");
  }
  if (auto it = doc.find("graph"); it != doc.end()) {
    const json& j = *it;
    reject_unknown(j, "graph", {"kind", "rho", "B"});
    c.graph.kind = read_enum(j, "kind", c.graph.kind, "graph",
                             {{"segmented", GraphKind::kSegmented}, {"complete", GraphKind::kComplete}});
    read(j, "rho", c.graph.rho, "graph");
    read(j, "B", c.graph.window, "graph");
  }
  if (auto it = doc.find("compressor"); it != doc.end()) {
    const json& j = *it;
    reject_unknown(j, "compressor", {"kind", "delta", "q"});
    c.compressor.kind = read_enum(j, "kind", c.compressor.kind, "compressor",
                                  {{"round", CompressorKind::kRound},
                                   {"identity", CompressorKind::kIdentity},
                                   {"dithered", CompressorKind::kDithered}});
    read(j, "delta", c.compressor.delta, "compressor");
    read(j, "q", c.compressor.bits, "compressor");
  }
  if (auto it = doc.find("schedule"); it != doc.end()) {
    const json& j = *it;
    reject_unknown(j, "schedule", {"family", "theta1", "theta2", "mu", "alpha0", "gamma0", "s0"});
    c.schedule.family = read_enum(j, "family", c.schedule.family, "schedule",
                                  {{"polynomial", ScheduleFamily::kPolynomial},
                                   {"geometric", ScheduleFamily::kGeometric}});
    read(j, "theta1", c.schedule.theta1, "schedule");
    read(j, "theta2", c.schedule.theta2, "schedule");
    read(j, "mu", c.schedule.mu, "schedule");
    read_optional(j, "alpha0", c.schedule.alpha0, "schedule");
    read_optional(j, "gamma0", c.schedule.gamma0, "schedule");
    read(j, "s0", c.schedule.s0, "schedule");
  }
  if (auto it = doc.find("run"); it != doc.end()) {
    const json& j = *it;
    reject_unknown(j, "run",
                   {"T", "seed", "trace", "algorithm", "estimates", "metrics", "checkpoints"});
    read(j, "T", c.run.horizon, "run");
    read(j, "seed", c.run.seed, "run");
    read(j, "trace", c.run.trace, "run");
    c.run.algorithm = read_enum(j, "algorithm", c.run.algorithm, "run",
                                {{"compressed", Algorithm::kCompressed},
                                 {"baseline", Algorithm::kBaseline}});
    c.run.estimates = read_enum(j, "estimates", c.run.estimates, "run",
                                {{"canonical", EstimateMode::kCanonical},
                                 {"per_reader", EstimateMode::kPerReader}});
    read(j, "metrics", c.run.metrics, "run");
    read(j, "checkpoints", c.run.checkpoints, "run");
  }
  validate(c);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_run_config(text.str());
  } catch (const Error& e) {
    raise(e.code(), path + ": " + e.what());
  }
}

std::string serialize_run_config(const RunConfig& c) {
  json problem = {{"kind", "localization"},
                  {"n", c.problem.agents},
                  {"p", c.problem.dimension},
                  {"m_i", c.problem.constraints_per_agent},
                  {"b", c.problem.margin},
                  {"box", c.problem.box_half_width},
                  {"no_slater", c.problem.no_slater}};
  if (!c.problem.instance_file.empty()) problem["instance_file"] = c.problem.instance_file;
  json doc = {
      {"name", c.name},
      {"problem", problem},
      {"graph", {{"kind", to_string(c.graph.kind)}, {"rho", c.graph.rho}, {"B", c.graph.window}}},
      {"compressor",
       {{"kind", to_string(c.compressor.kind)},
        {"delta", c.compressor.delta},
        {"q", c.compressor.bits}}},
      {"schedule",
       {{"family", to_string(c.schedule.family)},
        {"theta1", c.schedule.theta1},
        {"theta2", c.schedule.theta2},
        {"mu", c.schedule.mu},
        {"alpha0", optional_json(c.schedule.alpha0)},
        {"gamma0", optional_json(c.schedule.gamma0)},
        {"s0", c.schedule.s0}}},
      {"run",
       {{"T", c.run.horizon},
        {"seed", c.run.seed},
        {"trace", c.run.trace},
        {"algorithm", to_string(c.run.algorithm)},
        {"estimates", c.run.estimates == EstimateMode::kCanonical ? "canonical" : "per_reader"},
        {"metrics", c.run.metrics},
        {"checkpoints", c.run.checkpoints}}},
  };
  return doc.dump(2);
}

Compressor make_compressor(const CompressorBlock& block) {
  switch (block.kind) {
    case CompressorKind::kRound: return Compressor::rounding(block.delta, block.bits);
    case CompressorKind::kIdentity: return Compressor::identity();
    case CompressorKind::kDithered: return Compressor::dithered(block.delta, block.bits);
  }
  raise(ErrorCode::kConfig, "unknown compressor kind");
}

}  // namespace dopd
