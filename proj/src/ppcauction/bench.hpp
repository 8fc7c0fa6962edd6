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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ppcauction/environment.hpp"
#include "ppcauction/learner.hpp"
#include "ppcauction/rng.hpp"

namespace ppcauction {

using Json = nlohmann::json;

// Same CTR for every ad; the auction then ranks by bid alone.
std::vector<double> baseline_fixed_ctr(const ContextMatrix& context, double value = 0.5);
// Independent uniform CTRs.
std::vector<double> baseline_random_ctr(std::size_t num_ads, Rng& rng);

class FixedCtrLearner : public Learner {
 public:
  explicit FixedCtrLearner(double value = 0.5);
  std::vector<double> propose(const ContextMatrix& context) override;
  void observe(const RoundFeedback&) override {}

 private:
  double value_;
};

class RandomCtrLearner : public Learner {
 public:
  explicit RandomCtrLearner(Rng rng) : rng_(rng) {}
  std::vector<double> propose(const ContextMatrix& context) override;
  void observe(const RoundFeedback&) override {}

 private:
  Rng rng_;
};

struct EnvironmentSpec {
  EnvironmentKind kind = EnvironmentKind::kSynthetic;
  SyntheticConfig synthetic;
  HardInstanceConfig hard;
  StationaryConfig stationary;
  Json raw;

  static EnvironmentSpec from_json(const Json& j);
  std::size_t horizon() const;
  // Lowest bid any round can carry; bounds the sigma-mixture minimum bid.
  double min_bid() const;
  bool contextual() const { return kind == EnvironmentKind::kSynthetic; }
  EnvironmentTrace build(std::uint64_t seed) const;
};

// One entry of the algorithm list. `grid` maps hyperparameter names to value
// lists; `params` holds the fixed ones.
struct AlgorithmSpec {
  std::string id;
  std::string type;
  Json params = Json::object();
  Json grid = Json::object();

  static AlgorithmSpec from_json(const Json& j);
  // Cartesian product of the grid merged over `params`, keys in sorted order
  // with the last key varying fastest.
  std::vector<Json> grid_points() const;
};

enum class Selection { kJoint, kPerSeed };

struct ExperimentConfig {
  std::string name = "experiment";
  EnvironmentSpec environment;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<std::uint64_t> seeds;
  std::size_t record_stride = 0;  // 0: horizon / 200
  Selection selection = Selection::kJoint;
  bool round_log = false;
  bool write_traces = false;
  Json raw;

  static ExperimentConfig from_json(const Json& j);
  static ExperimentConfig load(const std::string& path);

  std::size_t stride() const;
  // Rejects unknown algorithms, invalid estimator/class combinations and
  // out-of-range hyperparameters before anything runs.
  void validate() const;
};

// Sets a dotted key ("environment.horizon", "algorithms.0.grid.eta") to a
// value parsed as JSON, or as a string if it is not valid JSON.
void apply_override(Json& config, const std::string& assignment);

std::unique_ptr<Learner> make_learner(const AlgorithmSpec& spec, const Json& hyperparameters,
                                      const EnvironmentTrace& env, Rng rng);

struct RoundLog {
  std::size_t round;  // 1-based
  double oracle_revenue;
  double payment;
  std::size_t winner;
  bool clicked;
};

struct RunResult {
  std::string algorithm;
  std::size_t grid_id = 0;
  Json hyperparameters;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::size_t, double>> trace;  // (round, cumulative regret)
  double final_regret = 0.0;
  double wall_seconds = 0.0;
  std::optional<SigmoidLinear> final_predictor;
  std::vector<RoundLog> rounds;  // only when round logging is on
};

// Plays every round of `env` with `learner`. Clicks use the kClicks substream
// of `seed`, one uniform per round.
RunResult run_episode(const EnvironmentTrace& env, Learner& learner, std::uint64_t seed,
                      std::size_t stride, bool log_rounds = false);

struct ExperimentResult {
  std::vector<RunResult> runs;  // sorted by (algorithm order, grid id, seed)
  std::vector<EnvironmentTrace> traces;  // one per seed, config order
};

// Runs every (algorithm, grid point, seed). A non-null `replay` trace replaces
// the generated environment for every seed.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers,
                                const EnvironmentTrace* replay = nullptr);

struct SummaryRow {
  std::string algorithm;
  std::size_t round;
  double mean;
  double std;
};

struct Summary {
  std::vector<SummaryRow> rows;
  // Best grid id per algorithm (joint selection) or per (algorithm, seed).
  std::vector<std::pair<std::string, std::vector<std::size_t>>> best;
};

// Mean and sample standard deviation of cumulative regret across seeds at the
// grid point with the lowest mean final regret (or per seed, each seed's best).
Summary summarize(const std::vector<RunResult>& runs, Selection selection);

void write_results_csv(const std::vector<RunResult>& runs, const std::string& path);
std::vector<RunResult> read_results_csv(const std::string& path);
void write_summary_csv(const Summary& summary, const std::string& path);
void write_round_log_csv(const std::vector<RunResult>& runs, const std::string& path);

// Writes results.csv, summary.csv and run.json (plus rounds.csv and
// trace_seed<k>.csv when enabled) into `dir`. Wall times go to timings.json,
// the only output that differs between identical runs.
void write_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                      const std::string& dir);

}  // namespace ppcauction
