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

/* C interface to the dopd simulator. Every call returns a dopd_status; on
 * failure dopd_last_error() describes the most recent error of the calling
 * thread. Handles are opaque and owned by the caller. */
#ifndef DOPD_DOPD_H_
#define DOPD_DOPD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(DOPD_BUILDING_LIBRARY)
#define DOPD_API __attribute__((visibility("default")))
#else
#define DOPD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dopd_status {
  DOPD_OK = 0,
  DOPD_ERR_CONFIG = 1,
  DOPD_ERR_INDEX = 2,
  DOPD_ERR_PRECONDITION = 3,
  DOPD_ERR_NUMERIC = 4,
  DOPD_ERR_IO = 5,
  DOPD_ERR_PARSE = 6,
  DOPD_ERR_INFEASIBLE = 7,
  DOPD_ERR_CONVERGENCE = 8,
  DOPD_ERR_UNAVAILABLE = 9,
  DOPD_ERR_ARGUMENT = 10, /* null handle or output pointer */
  DOPD_ERR_INTERNAL = 11,
  DOPD_ERR_FAILED = 12 /* completed, but a run or property failed */
} dopd_status;

typedef struct dopd_config dopd_config;
typedef struct dopd_run dopd_run;
typedef struct dopd_campaign dopd_campaign;

typedef struct dopd_checkpoint {
  int64_t t;
  double net_regret;
  double net_ccv;
  int64_t bits_sent;
  int64_t bits_compressed;
  int64_t bits_baseline;
  int64_t messages_per_source;
  double slope_regret; /* NaN with fewer than 4 usable checkpoints */
  double slope_ccv;
} dopd_checkpoint;

typedef struct dopd_diagnostics {
  int64_t rounds;
  int64_t feasibility_violations;
  int64_t disconnected_windows;
  int64_t overflow_messages;
  int64_t warnings;
  double alpha0;
  double gamma0;
  double gradient_bound;
  double jacobian_bound;
  double lipschitz;
} dopd_diagnostics;

/* Receives one line of progress or report text, without a trailing newline. */
typedef void (*dopd_line_fn)(const char* line, void* user);

DOPD_API const char* dopd_version(void);
DOPD_API const char* dopd_last_error(void);
DOPD_API const char* dopd_status_name(dopd_status status);

/* Run configurations (JSON). */
DOPD_API dopd_status dopd_config_load(const char* path, dopd_config** out);
DOPD_API dopd_status dopd_config_parse(const char* json, dopd_config** out);
DOPD_API dopd_status dopd_config_set_seed(dopd_config* config, uint64_t seed);
DOPD_API dopd_status dopd_config_set_trace(dopd_config* config, int trace);
/* Copies at most `capacity` bytes including the terminator; *needed receives
 * the full size. */
DOPD_API dopd_status dopd_config_serialize(const dopd_config* config, char* buffer,
                                           size_t capacity, size_t* needed);
DOPD_API dopd_status dopd_config_export_instance(const dopd_config* config, const char* path);
DOPD_API void dopd_config_free(dopd_config* config);

/* Single runs. */
DOPD_API dopd_status dopd_run_execute(const dopd_config* config, dopd_run** out);
DOPD_API dopd_status dopd_run_checkpoint_count(const dopd_run* run, size_t* count);
DOPD_API dopd_status dopd_run_checkpoint(const dopd_run* run, size_t index,
                                         dopd_checkpoint* out);
DOPD_API dopd_status dopd_run_diagnostics(const dopd_run* run, dopd_diagnostics* out);
DOPD_API dopd_status dopd_run_warning(const dopd_run* run, size_t index, const char** text);
/* Copies of the final primal iterates, agent-major (n * p doubles). */
DOPD_API dopd_status dopd_run_final_primal(const dopd_run* run, double* buffer,
                                           size_t capacity, size_t* needed);
DOPD_API dopd_status dopd_run_write_csv(const dopd_run* run, const char* path);
DOPD_API dopd_status dopd_run_write_rounds(const dopd_run* run, const char* path);
DOPD_API dopd_status dopd_run_write_edge_trace(const dopd_run* run, const char* path);
DOPD_API dopd_status dopd_run_write_message_trace(const dopd_run* run, const char* path);
DOPD_API dopd_status dopd_run_write_state_trace(const dopd_run* run, const char* path);
DOPD_API void dopd_run_free(dopd_run* run);

/* Campaigns. */
DOPD_API dopd_status dopd_campaign_load(const char* path, dopd_campaign** out);
/* desk != 0 selects n = 10 instead of n = 100. */
DOPD_API dopd_status dopd_campaign_preset_paper(int desk, dopd_campaign** out);
DOPD_API dopd_status dopd_campaign_set_output_dir(dopd_campaign* campaign, const char* dir);
/* Replaces the seed list with a single seed. */
DOPD_API dopd_status dopd_campaign_set_seed(dopd_campaign* campaign, uint64_t seed);
DOPD_API dopd_status dopd_campaign_write(const dopd_campaign* campaign, const char* path);
/* DOPD_ERR_FAILED when any run failed; the summary is still written. */
DOPD_API dopd_status dopd_campaign_run(const dopd_campaign* campaign, int force,
                                       dopd_line_fn log, void* user);
DOPD_API void dopd_campaign_free(dopd_campaign* campaign);

/* Property suite; one line per property (report may be null).
 * DOPD_ERR_FAILED if any fails. */
DOPD_API dopd_status dopd_verify(uint64_t seed, dopd_line_fn report, void* user);

/* Slope fits over the checkpoint rows of a run CSV, reported as lines. */
DOPD_API dopd_status dopd_slopes_from_csv(const char* path, dopd_line_fn report, void* user);

#ifdef __cplusplus
}
#endif

#endif /* DOPD_DOPD_H_ */
