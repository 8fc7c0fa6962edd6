// Copyright 2026 The ppcauction Authors.
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

#ifndef PPCAUCTION_PPCAUCTION_H_
#define PPCAUCTION_PPCAUCTION_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PPCA_BUILDING)
#define PPCA_API __attribute__((visibility("default")))
#else
#define PPCA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ppca_status {
  PPCA_OK = 0,
  PPCA_INVALID_ARGUMENT = 1,  // null pointer, bad handle
  PPCA_CONFIG = 2,            // malformed or inconsistent configuration
  PPCA_RUNTIME = 3,           // failure while running (state, fitting)
  PPCA_IO = 4,                // unreadable or unwritable file
  PPCA_DIMENSION = 5,         // mismatched vector lengths, fewer than two ads
  PPCA_PARAMETER = 6,         // value outside its allowed range
  PPCA_CAPACITY = 7           // predictor class larger than the budget
} ppca_status;

// Message for the last failing call on this thread; never null.
PPCA_API const char* ppca_last_error(void);
PPCA_API const char* ppca_version(void);
PPCA_API const char* ppca_rng_algorithm(void);

typedef struct ppca_auction_outcome {
  size_t winner;
  size_t runner_up;
  double price_per_click;
  int clicked;
  double payment;
} ppca_auction_outcome;

// One second-price auction. A click happens iff click_draw < true_ctrs[winner].
PPCA_API ppca_status ppca_run_auction(const double* bids, const double* estimates,
                                      const double* true_ctrs, size_t num_ads, double click_draw,
                                      ppca_auction_outcome* out);
// smax_i bids[i] * ctrs[i].
PPCA_API ppca_status ppca_oracle_revenue(const double* bids, const double* ctrs, size_t num_ads,
                                         double* out);

typedef struct ppca_trace ppca_trace;

// kind: "synthetic", "hard_instance" or "stationary"; config_json may be null
// or an environment object as in experiment configs.
PPCA_API ppca_status ppca_trace_generate(const char* config_json, uint64_t seed, ppca_trace** out);
PPCA_API ppca_status ppca_trace_load(const char* path, ppca_trace** out);
PPCA_API ppca_status ppca_trace_save(const ppca_trace* trace, const char* path);
PPCA_API size_t ppca_trace_rounds(const ppca_trace* trace);
PPCA_API void ppca_trace_free(ppca_trace* trace);

typedef struct ppca_experiment ppca_experiment;

PPCA_API ppca_status ppca_experiment_from_file(const char* path, ppca_experiment** out);
PPCA_API ppca_status ppca_experiment_from_string(const char* json, ppca_experiment** out);
// "dotted.key=value"; the config is re-validated.
PPCA_API ppca_status ppca_experiment_override(ppca_experiment* exp, const char* assignment);
// Replay: every seed plays this trace instead of a generated one.
PPCA_API ppca_status ppca_experiment_set_trace_file(ppca_experiment* exp, const char* path);
// workers == 0 picks PPCAUCTION_WORKERS or the hardware concurrency.
PPCA_API ppca_status ppca_experiment_run(ppca_experiment* exp, unsigned workers);
PPCA_API ppca_status ppca_experiment_write(const ppca_experiment* exp, const char* dir);
PPCA_API size_t ppca_experiment_run_count(const ppca_experiment* exp);
PPCA_API ppca_status ppca_experiment_final_regret(const ppca_experiment* exp, size_t run,
                                                  double* out);
PPCA_API void ppca_experiment_free(ppca_experiment* exp);

// Reads a results.csv and writes the matching summary.csv.
PPCA_API ppca_status ppca_summarize_csv(const char* results_path, int per_seed_best,
                                        const char* out_path);

#ifdef __cplusplus
}
#endif

#endif  // PPCAUCTION_PPCAUCTION_H_
