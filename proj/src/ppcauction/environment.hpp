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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppcauction/predictors.hpp"

namespace ppcauction {

enum class EnvironmentKind { kSynthetic, kHardInstance, kStationary };

EnvironmentKind parse_environment_kind(std::string_view name);
std::string_view to_string(EnvironmentKind kind);

// Synthetic contextual auctions with a fitted sigmoid-linear ground truth.
struct SyntheticConfig {
  std::size_t dim = 16;
  std::size_t horizon = 2000;
  std::size_t min_ads = 5;
  std::size_t max_ads = 10;
  double bid_low = 0.1;
  double bid_high = 1.0;
  double fake_ctr_low = 0.2;
  double fake_ctr_high = 1.0;
  // Bid given to the lowest-CTR ad of every round.
  double lowest_ctr_bid = 1.0;
  double bid_max = 1.0;
  double param_bound = 1.0;
  std::size_t fit_epochs = 200;
  double fit_step = 0.1;

  void validate() const;
};

// Two-elevated-ads instance: CTR 1/2 everywhere except ads i and j, which get
// 1/2 + sqrt(N / T) / 4. All bids are 1.
struct HardInstanceConfig {
  std::size_t num_ads = 5;
  std::size_t horizon = 2000;

  void validate() const;
};

// Fixed CTRs drawn once, fresh uniform bids every round.
struct StationaryConfig {
  std::size_t num_ads = 2;
  std::size_t horizon = 2000;
  double ctr_low = 0.2;
  double ctr_high = 1.0;
  double bid_low = 0.1;
  double bid_high = 1.0;

  void validate() const;
};

struct Round {
  ContextMatrix context;
  std::vector<double> bids;
  std::vector<double> true_ctr;  // hidden from learners

  std::size_t num_ads() const { return bids.size(); }
};

struct EnvironmentTrace {
  EnvironmentKind kind = EnvironmentKind::kSynthetic;
  std::uint64_t seed = 0;
  std::string config_json;  // echo of the generating config
  double bid_max = 1.0;
  std::vector<Round> rounds;

  std::optional<SigmoidLinear> truth;        // contextual ground truth
  std::vector<double> fixed_ctr;             // non-contextual ground truth
  std::optional<std::pair<std::size_t, std::size_t>> elevated;  // hard instance
  double epsilon_gap = 0.0;                  // hard instance

  std::size_t horizon() const { return rounds.size(); }
  std::size_t dim() const { return rounds.empty() ? 0 : rounds.front().context.dim(); }
  std::size_t max_ads() const;
};

// Diagnostics of the ground-truth fit.
struct FitReport {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::size_t epochs = 0;
};

EnvironmentTrace generate_synthetic(const SyntheticConfig& config, std::uint64_t seed,
                                    FitReport* report = nullptr);
EnvironmentTrace hard_instance(const HardInstanceConfig& config, std::uint64_t seed);
EnvironmentTrace stationary_instance(const StationaryConfig& config, std::uint64_t seed);

// Elevation used by the hard instance: sqrt(N / T) / 4.
double hard_instance_gap(std::size_t num_ads, std::size_t horizon);

// 1 iff uniform_draw < true_ctr.
bool sample_click(double true_ctr, double uniform_draw);

// smax_i b_{t,i} rho_{t,i} for every round.
std::vector<double> oracle_baseline_trace(const EnvironmentTrace& env);

// Columnar text format: '#'-prefixed header (seed, generator, config echo,
// ground-truth parameters) followed by one CSV row per (round, ad).
void save_trace(const EnvironmentTrace& env, const std::string& path);
EnvironmentTrace load_trace(const std::string& path);

}  // namespace ppcauction
