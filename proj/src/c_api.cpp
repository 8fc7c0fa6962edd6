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

#include "ppcauction/ppcauction.h"

#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "ppcauction/auction.hpp"
#include "ppcauction/bench.hpp"
#include "ppcauction/environment.hpp"
#include "ppcauction/error.hpp"
#include "ppcauction/numfmt.hpp"

using namespace ppcauction;

struct ppca_trace {
  EnvironmentTrace trace;
};

struct ppca_experiment {
  Json raw;
  ExperimentConfig config;
  std::optional<EnvironmentTrace> replay;
  std::optional<ExperimentResult> result;
};

namespace {

thread_local std::string g_last_error;

ppca_status fail(ppca_status status, const char* message) {
  g_last_error = message;
  return status;
}

template <class F>
ppca_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return PPCA_OK;
  } catch (const DimensionError& e) {
    return fail(PPCA_DIMENSION, e.what());
  } catch (const CapacityError& e) {
    return fail(PPCA_CAPACITY, e.what());
  } catch (const ParameterError& e) {
    return fail(PPCA_PARAMETER, e.what());
  } catch (const ConfigError& e) {
    return fail(PPCA_CONFIG, e.what());
  } catch (const IoError& e) {
    return fail(PPCA_IO, e.what());
  } catch (const Json::exception& e) {
    return fail(PPCA_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(PPCA_RUNTIME, e.what());
  } catch (...) {
    return fail(PPCA_RUNTIME, "unknown error");
  }
}

#define PPCA_REQUIRE(cond)                                                         \
  do {                                                                             \
    if (!(cond)) return fail(PPCA_INVALID_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PPCAUCTION_WORKERS")) {
    try {
      const auto n = parse_int<unsigned>(env);
      if (n > 0) return n;
    } catch (const IoError&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

extern "C" {

const char* ppca_last_error(void) { return g_last_error.c_str(); }

const char* ppca_version(void) { return "1.0.0"; }

const char* ppca_rng_algorithm(void) { return kRngAlgorithm; }

ppca_status ppca_run_auction(const double* bids, const double* estimates, const double* true_ctrs,
                             size_t num_ads, double click_draw, ppca_auction_outcome* out) {
  PPCA_REQUIRE(bids && estimates && true_ctrs && out);
  return guarded([&] {
    const AuctionOutcome o = run_auction(std::span(bids, num_ads), std::span(estimates, num_ads),
                                         std::span(true_ctrs, num_ads), click_draw);
    *out = {o.winner, o.runner_up, o.price_per_click, o.clicked ? 1 : 0, o.payment};
  });
}

ppca_status ppca_oracle_revenue(const double* bids, const double* ctrs, size_t num_ads, double* out) {
  PPCA_REQUIRE(bids && ctrs && out);
  return guarded([&] { *out = oracle_round_revenue(std::span(bids, num_ads), std::span(ctrs, num_ads)); });
}

ppca_status ppca_trace_generate(const char* config_json, uint64_t seed, ppca_trace** out) {
  PPCA_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    Json j = config_json ? Json::parse(config_json) : Json::object();
    const EnvironmentSpec spec = EnvironmentSpec::from_json(j);
    *out = new ppca_trace{spec.build(seed)};
  });
}

ppca_status ppca_trace_load(const char* path, ppca_trace** out) {
  PPCA_REQUIRE(path && out);
  *out = nullptr;
  return guarded([&] { *out = new ppca_trace{load_trace(path)}; });
}

ppca_status ppca_trace_save(const ppca_trace* trace, const char* path) {
  PPCA_REQUIRE(trace && path);
  return guarded([&] { save_trace(trace->trace, path); });
}

size_t ppca_trace_rounds(const ppca_trace* trace) { return trace ? trace->trace.horizon() : 0; }

void ppca_trace_free(ppca_trace* trace) { delete trace; }

ppca_status ppca_experiment_from_file(const char* path, ppca_experiment** out) {
  PPCA_REQUIRE(path && out);
  *out = nullptr;
  return guarded([&] {
    ExperimentConfig c = ExperimentConfig::load(path);
    Json raw = c.raw;
    *out = new ppca_experiment{std::move(raw), std::move(c), std::nullopt, std::nullopt};
  });
}

ppca_status ppca_experiment_from_string(const char* json, ppca_experiment** out) {
  PPCA_REQUIRE(json && out);
  *out = nullptr;
  return guarded([&] {
    Json raw = Json::parse(json);
    ExperimentConfig c = ExperimentConfig::from_json(raw);
    *out = new ppca_experiment{std::move(raw), std::move(c), std::nullopt, std::nullopt};
  });
}

ppca_status ppca_experiment_override(ppca_experiment* exp, const char* assignment) {
  PPCA_REQUIRE(exp && assignment);
  return guarded([&] {
    Json raw = exp->raw;
    apply_override(raw, assignment);
    exp->config = ExperimentConfig::from_json(raw);
    exp->raw = std::move(raw);
    exp->result.reset();
  });
}

ppca_status ppca_experiment_set_trace_file(ppca_experiment* exp, const char* path) {
  PPCA_REQUIRE(exp && path);
  return guarded([&] {
    exp->replay = load_trace(path);
    exp->result.reset();
  });
}

ppca_status ppca_experiment_run(ppca_experiment* exp, unsigned workers) {
  PPCA_REQUIRE(exp);
  return guarded([&] {
    exp->result = run_experiment(exp->config, resolve_workers(workers),
                                 exp->replay ? &*exp->replay : nullptr);
  });
}

ppca_status ppca_experiment_write(const ppca_experiment* exp, const char* dir) {
  PPCA_REQUIRE(exp && dir);
  if (!exp->result) return fail(PPCA_RUNTIME, "experiment has not been run");
  return guarded([&] { write_experiment(exp->config, *exp->result, dir); });
}

size_t ppca_experiment_run_count(const ppca_experiment* exp) {
  return exp && exp->result ? exp->result->runs.size() : 0;
}

ppca_status ppca_experiment_final_regret(const ppca_experiment* exp, size_t run, double* out) {
  PPCA_REQUIRE(exp && out);
  if (!exp->result) return fail(PPCA_RUNTIME, "experiment has not been run");
  PPCA_REQUIRE(run < exp->result->runs.size());
  *out = exp->result->runs[run].final_regret;
  return PPCA_OK;
}

void ppca_experiment_free(ppca_experiment* exp) { delete exp; }

ppca_status ppca_summarize_csv(const char* results_path, int per_seed_best, const char* out_path) {
  PPCA_REQUIRE(results_path && out_path);
  return guarded([&] {
    const auto runs = read_results_csv(results_path);
    if (runs.empty()) throw IoError("results file has no rows");
    write_summary_csv(summarize(runs, per_seed_best ? Selection::kPerSeed : Selection::kJoint), out_path);
  });
}

}  // extern "C"
