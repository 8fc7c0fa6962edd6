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

// Benchmark driver: run, replay and summarize experiments.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ppcauction/ppcauction.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code(ppca_status s) {
  switch (s) {
    case PPCA_OK: return 0;
    case PPCA_CONFIG:
    case PPCA_PARAMETER:
    case PPCA_CAPACITY:
    case PPCA_DIMENSION:
    case PPCA_INVALID_ARGUMENT: return kExitConfig;
    default: return kExitRuntime;
  }
}

int report(ppca_status s, const char* what) {
  if (s == PPCA_OK) return 0;
  std::fprintf(stderr, "ppcauction: %s: %s\n", what, ppca_last_error());
  return exit_code(s);
}

struct ExperimentHandle {
  ppca_experiment* p = nullptr;
  ~ExperimentHandle() { ppca_experiment_free(p); }
};

int run(const std::string& config, const std::string& trace, const std::string& out, unsigned workers,
        const std::vector<std::string>& overrides) {
  ExperimentHandle exp;
  if (int rc = report(ppca_experiment_from_file(config.c_str(), &exp.p), "config")) return rc;
  for (const auto& o : overrides) {
    if (int rc = report(ppca_experiment_override(exp.p, o.c_str()), "override")) return rc;
  }
  if (!trace.empty()) {
    if (int rc = report(ppca_experiment_set_trace_file(exp.p, trace.c_str()), "trace")) return rc;
  }
  if (int rc = report(ppca_experiment_run(exp.p, workers), "run")) return rc;
  if (int rc = report(ppca_experiment_write(exp.p, out.c_str()), "write")) return rc;
  std::printf("%zu runs written to %s\n", ppca_experiment_run_count(exp.p), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual second-price pay-per-click auction benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ppca_version());

  std::string config, trace, results, out = "results";
  std::string summary_out;
  unsigned workers = 0;
  bool per_seed = false;
  std::vector<std::string> overrides;

  auto* run_cmd = app.add_subcommand("run", "Run every algorithm, grid point and seed of a config");
  run_cmd->add_option("config", config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", out, "Output directory")->capture_default_str();
  run_cmd->add_option("--workers", workers, "Worker threads (default: $PPCAUCTION_WORKERS or all cores)");
  run_cmd->add_option("--override", overrides, "dotted.key=value, repeatable");

  auto* replay_cmd = app.add_subcommand("replay", "Run a config against a saved environment trace");
  replay_cmd->add_option("trace", trace, "Trace file written by a previous run")->required();
  replay_cmd->add_option("config", config, "Experiment config (JSON)")->required();
  replay_cmd->add_option("--out", out, "Output directory")->capture_default_str();
  replay_cmd->add_option("--workers", workers, "Worker threads");
  replay_cmd->add_option("--override", overrides, "dotted.key=value, repeatable");

  auto* sum_cmd = app.add_subcommand("summarize", "Mean and std of cumulative regret from results.csv");
  sum_cmd->add_option("results", results, "results.csv")->required();
  sum_cmd->add_option("--out", summary_out, "Summary path (default: summary.csv next to the input)");
  sum_cmd->add_flag("--per-seed-best", per_seed, "Pick the best grid point separately for each seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (*run_cmd) return run(config, "", out, workers, overrides);
  if (*replay_cmd) return run(config, trace, out, workers, overrides);
  if (summary_out.empty()) {
    summary_out = (std::filesystem::path(results).parent_path() / "summary.csv").string();
  }
  if (int rc = report(ppca_summarize_csv(results.c_str(), per_seed ? 1 : 0, summary_out.c_str()),
                      "summarize")) {
    return rc;
  }
  std::printf("summary written to %s\n", summary_out.c_str());
  return 0;
}
