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

#include "dopd/dopd.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "dopd/campaign.hpp"
#include "dopd/config.hpp"
#include "dopd/experiment.hpp"
#include "dopd/metrics.hpp"
#include "dopd/verify.hpp"

struct dopd_config {
  dopd::RunConfig value;
};

struct dopd_run {
  dopd::RunReport report;
};

struct dopd_campaign {
  dopd::Campaign value;
};

namespace {

thread_local std::string last_error;

dopd_status to_status(dopd::ErrorCode code) {
  using dopd::ErrorCode;
  switch (code) {
    case ErrorCode::kConfig: return DOPD_ERR_CONFIG;
    case ErrorCode::kIndex: return DOPD_ERR_INDEX;
    case ErrorCode::kPrecondition: return DOPD_ERR_PRECONDITION;
    case ErrorCode::kNumeric: return DOPD_ERR_NUMERIC;
    case ErrorCode::kIo: return DOPD_ERR_IO;
    case ErrorCode::kParse: return DOPD_ERR_PARSE;
    case ErrorCode::kInfeasible: return DOPD_ERR_INFEASIBLE;
    case ErrorCode::kConvergence: return DOPD_ERR_CONVERGENCE;
    case ErrorCode::kUnavailable: return DOPD_ERR_UNAVAILABLE;
  }
  return DOPD_ERR_INTERNAL;
}

dopd_status fail(dopd_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
dopd_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const dopd::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DOPD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DOPD_ERR_INTERNAL, e.what());
  }
}

#define DOPD_CHECK_ARG(p) \
  if ((p) == nullptr) return fail(DOPD_ERR_ARGUMENT, #p " must not be null")

std::ofstream open_output(const char* path) {
  std::ofstream out(path);
  if (!out) dopd::raise(dopd::ErrorCode::kIo, std::string("cannot write ") + path);
  return out;
}

void emit(dopd_line_fn fn, void* user, const std::string& line) {
  if (fn != nullptr) fn(line.c_str(), user);
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

extern "C" {

const char* dopd_version(void) { return "0.1.0"; }

const char* dopd_last_error(void) { return last_error.c_str(); }

const char* dopd_status_name(dopd_status status) {
  switch (status) {
    case DOPD_OK: return "ok";
    case DOPD_ERR_CONFIG: return "config error";
    case DOPD_ERR_INDEX: return "index error";
    case DOPD_ERR_PRECONDITION: return "precondition violation";
    case DOPD_ERR_NUMERIC: return "numeric error";
    case DOPD_ERR_IO: return "i/o error";
    case DOPD_ERR_PARSE: return "parse error";
    case DOPD_ERR_INFEASIBLE: return "infeasible";
    case DOPD_ERR_CONVERGENCE: return "no convergence";
    case DOPD_ERR_UNAVAILABLE: return "unavailable";
    case DOPD_ERR_ARGUMENT: return "invalid argument";
    case DOPD_ERR_INTERNAL: return "internal error";
    case DOPD_ERR_FAILED: return "failed";
  }
  return "unknown status";
}

dopd_status dopd_config_load(const char* path, dopd_config** out) {
  DOPD_CHECK_ARG(path);
  DOPD_CHECK_ARG(out);
  *out = nullptr;
  return guarded([&] {
    *out = new dopd_config{dopd::load_run_config(path)};
    return DOPD_OK;
  });
}

dopd_status dopd_config_parse(const char* json, dopd_config** out) {
  DOPD_CHECK_ARG(json);
  DOPD_CHECK_ARG(out);
  *out = nullptr;
  return guarded([&] {
    *out = new dopd_config{dopd::parse_run_config(json)};
    return DOPD_OK;
  });
}

dopd_status dopd_config_set_seed(dopd_config* config, uint64_t seed) {
  DOPD_CHECK_ARG(config);
  config->value.run.seed = seed;
  return DOPD_OK;
}

dopd_status dopd_config_set_trace(dopd_config* config, int trace) {
  DOPD_CHECK_ARG(config);
  config->value.run.trace = trace != 0;
  return DOPD_OK;
}

dopd_status dopd_config_serialize(const dopd_config* config, char* buffer, size_t capacity,
                                  size_t* needed) {
  DOPD_CHECK_ARG(config);
  return guarded([&] {
    const std::string text = dopd::serialize_run_config(config->value);
    if (needed != nullptr) *needed = text.size() + 1;
    if (buffer != nullptr && capacity > 0) {
      const std::size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
    return DOPD_OK;
  });
}

dopd_status dopd_config_export_instance(const dopd_config* config, const char* path) {
  DOPD_CHECK_ARG(config);
  DOPD_CHECK_ARG(path);
  return guarded([&] {
    std::ofstream out = open_output(path);
    dopd::write_instance(out, dopd::build_instance(config->value));
    return DOPD_OK;
  });
}

void dopd_config_free(dopd_config* config) { delete config; }

dopd_status dopd_run_execute(const dopd_config* config, dopd_run** out) {
  DOPD_CHECK_ARG(config);
  DOPD_CHECK_ARG(out);
  *out = nullptr;
  return guarded([&] {
    *out = new dopd_run{dopd::execute_run(config->value)};
    return DOPD_OK;
  });
}

dopd_status dopd_run_checkpoint_count(const dopd_run* run, size_t* count) {
  DOPD_CHECK_ARG(run);
  DOPD_CHECK_ARG(count);
  *count = run->report.checkpoints.size();
  return DOPD_OK;
}

dopd_status dopd_run_checkpoint(const dopd_run* run, size_t index, dopd_checkpoint* out) {
  DOPD_CHECK_ARG(run);
  DOPD_CHECK_ARG(out);
  if (index >= run->report.checkpoints.size()) {
    return fail(DOPD_ERR_INDEX, "checkpoint index out of range");
  }
  const dopd::CheckpointMetrics& c = run->report.checkpoints[index];
  *out = {c.t,          c.net_regret,       c.net_ccv,
          c.bits_sent,  c.bits_compressed,  c.bits_baseline,
          c.messages_per_source, c.slope_regret, c.slope_ccv};
  return DOPD_OK;
}

dopd_status dopd_run_diagnostics(const dopd_run* run, dopd_diagnostics* out) {
  DOPD_CHECK_ARG(run);
  DOPD_CHECK_ARG(out);
  const dopd::RunReport& r = run->report;
  int64_t overflow = 0;
  for (const dopd::RoundSummary& s : r.history.rounds) overflow += s.overflow_messages;
  *out = {r.history.horizon(),
          r.history.feasibility_violations,
          r.disconnected_windows,
          overflow,
          static_cast<int64_t>(r.warnings.size()),
          r.alpha0,
          r.gamma0,
          r.bounds.gradient_bound,
          r.bounds.jacobian_bound_spectral,
          r.bounds.lipschitz};
  return DOPD_OK;
}

dopd_status dopd_run_warning(const dopd_run* run, size_t index, const char** text) {
  DOPD_CHECK_ARG(run);
  DOPD_CHECK_ARG(text);
  if (index >= run->report.warnings.size()) return fail(DOPD_ERR_INDEX, "no such warning");
  *text = run->report.warnings[index].c_str();
  return DOPD_OK;
}

dopd_status dopd_run_final_primal(const dopd_run* run, double* buffer, size_t capacity,
                                  size_t* needed) {
  DOPD_CHECK_ARG(run);
  const dopd::RunHistory& h = run->report.history;
  const size_t total = static_cast<size_t>(h.agents) * static_cast<size_t>(h.dimension);
  if (needed != nullptr) *needed = total;
  if (buffer == nullptr) return DOPD_OK;
  if (capacity < total) return fail(DOPD_ERR_ARGUMENT, "buffer too small");
  size_t k = 0;
  for (const dopd::Vector& z : h.final_primal) {
    for (double v : z) buffer[k++] = v;
  }
  return DOPD_OK;
}

dopd_status dopd_run_write_csv(const dopd_run* run, const char* path) {
  DOPD_CHECK_ARG(run);
  DOPD_CHECK_ARG(path);
  return guarded([&] {
    std::ofstream out = open_output(path);
    dopd::write_checkpoint_csv(out, run->report.checkpoints);
    return DOPD_OK;
  });
}

dopd_status dopd_run_write_rounds(const dopd_run* run, const char* path) {
  DOPD_CHECK_ARG(run);
  DOPD_CHECK_ARG(path);
  return guarded([&] {
    std::ofstream out = open_output(path);
    dopd::write_round_log(out, run->report.history);
    return DOPD_OK;
  });
}

dopd_status dopd_run_write_edge_trace(const dopd_run* run, const char* path) {
  DOPD_CHECK_ARG(run);
  DOPD_CHECK_ARG(path);
  return guarded([&] {
    std::ofstream out = open_output(path);
    dopd::write_edge_trace(out, run->report.history);
    return DOPD_OK;
  });
}

dopd_status dopd_run_write_message_trace(const dopd_run* run, const char* path) {
  DOPD_CHECK_ARG(run);
  DOPD_CHECK_ARG(path);
  return guarded([&] {
    std::ofstream out = open_output(path);
    const dopd::Compressor c = run->report.config.run.algorithm == dopd::Algorithm::kBaseline
                                   ? dopd::Compressor::identity()
                                   : dopd::make_compressor(run->report.config.compressor);
    dopd::write_message_trace(out, run->report.history, c);
    return DOPD_OK;
  });
}

dopd_status dopd_run_write_state_trace(const dopd_run* run, const char* path) {
  DOPD_CHECK_ARG(run);
  DOPD_CHECK_ARG(path);
  return guarded([&] {
    std::ofstream out = open_output(path);
    dopd::write_state_trace(out, run->report.history);
    return DOPD_OK;
  });
}

void dopd_run_free(dopd_run* run) { delete run; }

dopd_status dopd_campaign_load(const char* path, dopd_campaign** out) {
  DOPD_CHECK_ARG(path);
  DOPD_CHECK_ARG(out);
  *out = nullptr;
  return guarded([&] {
    *out = new dopd_campaign{dopd::load_campaign(path)};
    return DOPD_OK;
  });
}

dopd_status dopd_campaign_preset_paper(int desk, dopd_campaign** out) {
  DOPD_CHECK_ARG(out);
  *out = nullptr;
  return guarded([&] {
    *out = new dopd_campaign{dopd::preset_paper_experiment(desk != 0 ? dopd::PresetScale::kDesk
                                                                     : dopd::PresetScale::kFull)};
    return DOPD_OK;
  });
}

dopd_status dopd_campaign_set_output_dir(dopd_campaign* campaign, const char* dir) {
  DOPD_CHECK_ARG(campaign);
  DOPD_CHECK_ARG(dir);
  if (*dir == '\0') return fail(DOPD_ERR_CONFIG, "output directory must not be empty");
  campaign->value.output_dir = dir;
  return DOPD_OK;
}

dopd_status dopd_campaign_set_seed(dopd_campaign* campaign, uint64_t seed) {
  DOPD_CHECK_ARG(campaign);
  campaign->value.seeds = {seed};
  return DOPD_OK;
}

dopd_status dopd_campaign_write(const dopd_campaign* campaign, const char* path) {
  DOPD_CHECK_ARG(campaign);
  DOPD_CHECK_ARG(path);
  return guarded([&] {
    std::ofstream out = open_output(path);
    out << dopd::serialize_campaign(campaign->value) << '\n';
    return DOPD_OK;
  });
}

dopd_status dopd_campaign_run(const dopd_campaign* campaign, int force, dopd_line_fn log,
                              void* user) {
  DOPD_CHECK_ARG(campaign);
  return guarded([&] {
    const dopd::CampaignReport report = dopd::run_campaign(
        campaign->value, force != 0, [&](const std::string& line) { emit(log, user, line); });
    for (const dopd::CampaignSummaryRow& r : report.summary) {
      emit(log, user,
           r.name + ": NetReg " + number(r.net_regret.mean) + " NetCCV " +
               number(r.net_ccv.mean) + " slopes " + number(r.slope_regret.mean) + " / " +
               number(r.slope_ccv.mean) + " (" + std::to_string(r.completed) + " ok, " +
               std::to_string(r.failed) + " failed)");
    }
    if (!report.summary_path.empty()) emit(log, user, "summary: " + report.summary_path);
    if (!report.all_ok()) return fail(DOPD_ERR_FAILED, "one or more campaign runs failed");
    return DOPD_OK;
  });
}

void dopd_campaign_free(dopd_campaign* campaign) { delete campaign; }

dopd_status dopd_verify(uint64_t seed, dopd_line_fn report, void* user) {
  return guarded([&] {
    dopd::VerifyOptions options;
    options.seed = seed;
    bool all = true;
    for (const dopd::PropertyResult& r : dopd::verify_properties(options)) {
      emit(report, user, std::string(r.passed ? "PASS " : "FAIL ") + r.name + " (" + r.detail + ")");
      all = all && r.passed;
    }
    if (!all) return fail(DOPD_ERR_FAILED, "one or more properties failed");
    return DOPD_OK;
  });
}

dopd_status dopd_slopes_from_csv(const char* path, dopd_line_fn report, void* user) {
  DOPD_CHECK_ARG(path);
  return guarded([&] {
    std::ifstream in(path);
    if (!in) dopd::raise(dopd::ErrorCode::kIo, std::string("cannot open ") + path);
    const dopd::CsvTable table = dopd::read_csv(in);
    const std::size_t tc = table.column("T");
    std::vector<double> ts;
    for (const auto& row : table.rows) ts.push_back(row[tc]);
    std::string line = path;
    for (const char* name : {"NetReg", "NetCCV"}) {
      const std::size_t col = table.column(name);
      std::vector<double> v;
      for (const auto& row : table.rows) v.push_back(std::abs(row[col]));
      const dopd::GrowthFit fit = dopd::growth_exponent(ts, v);
      line += std::string(" ") + name + "_slope=" + number(fit.slope) + " (" +
              std::to_string(fit.used) + " used, " + std::to_string(fit.excluded) + " excluded)";
    }
    emit(report, user, line);
    return DOPD_OK;
  });
}

}  // extern "C"
