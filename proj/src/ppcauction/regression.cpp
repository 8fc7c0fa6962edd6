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

#include "ppcauction/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ppcauction/auction.hpp"
#include "ppcauction/error.hpp"

namespace ppcauction {

OgdOracle::OgdOracle(SigmoidLinear initial, double step) : theta_(std::move(initial)), step_(step) {
  if (!(step > 0.0)) throw ParameterError("OGD step must be positive");
  theta_.clamp();
}

std::vector<double> squared_error_gradient(const SigmoidLinear& theta, const ContextMatrix& x,
                                           std::size_t ad, bool clicked) {
  std::vector<double> g(theta.params().size(), 0.0);
  const double residual = theta.predict(x, ad) - (clicked ? 1.0 : 0.0);
  theta.accumulate_gradient(x, ad, 2.0 * residual, g);
  return g;
}

void OgdOracle::observe(const ContextMatrix& x, std::size_t ad, bool clicked) {
  const std::vector<double> g = squared_error_gradient(theta_, x, ad, clicked);
  auto params = theta_.params();
  for (std::size_t k = 0; k < params.size(); ++k) params[k] -= step_ * g[k];
  theta_.clamp();
}

ExplorationMode parse_exploration_mode(std::string_view name) {
  if (name == "one_hot") return ExplorationMode::kOneHot;
  if (name == "sigma_mixture") return ExplorationMode::kSigmaMixture;
  throw ConfigError("unknown exploration mode '" + std::string(name) + "'");
}

void ExplorationPolicy::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in [0,1]");
  if (mode == ExplorationMode::kSigmaMixture && !(sigma > 0.0 && sigma <= 1.0)) {
    throw ParameterError("sigma must lie in (0,1]");
  }
}

std::vector<double> exploration_estimates(const ExplorationPolicy& policy, std::size_t num_ads,
                                          std::size_t ad) {
  if (ad >= num_ads) throw DimensionError("exploration ad out of range");
  if (policy.mode == ExplorationMode::kOneHot) {
    std::vector<double> e(num_ads, 0.0);
    e[ad] = 1.0;
    return e;
  }
  const double floor = policy.sigma / 2.0;
  std::vector<double> e(num_ads, floor);
  e[ad] = 1.0;  // floor + (1 - floor)
  return e;
}

std::vector<double> choose_estimates(const ExplorationPolicy& policy, const SigmoidLinear& predictor,
                                     const ContextMatrix& x, double explore_draw,
                                     std::size_t ad_draw) {
  if (x.num_ads() < 2) throw DimensionError("a round needs at least two ads");
  if (explore_draw < policy.epsilon) return exploration_estimates(policy, x.num_ads(), ad_draw);
  return predictor.predict_all(x);
}

EpsGreedyLearner::EpsGreedyLearner(std::unique_ptr<RegressionOracle> oracle,
                                   ExplorationPolicy policy, Rng rng)
    : oracle_(std::move(oracle)), policy_(policy), rng_(rng) {
  if (!oracle_) throw ParameterError("regression oracle is null");
  policy_.validate();
}

std::vector<double> EpsGreedyLearner::propose(const ContextMatrix& context) {
  const double explore_draw = rng_.uniform();
  const std::size_t ad_draw = static_cast<std::size_t>(rng_.below(context.num_ads()));
  explored_ = explore_draw < policy_.epsilon;
  return choose_estimates(policy_, oracle_->current_predictor(), context, explore_draw, ad_draw);
}

void EpsGreedyLearner::observe(const RoundFeedback& fb) {
  oracle_->observe(fb.context, fb.outcome.winner, fb.outcome.clicked);
}

double theoretical_epsilon(std::size_t horizon, std::size_t num_ads, double reg_sq) {
  if (horizon == 0) throw ParameterError("horizon must be positive");
  if (!(reg_sq >= 0.0)) throw ParameterError("regression regret must be non-negative");
  const double eps = std::cbrt(static_cast<double>(num_ads) * reg_sq / static_cast<double>(horizon));
  return std::min(eps, 1.0);
}

double dec_objective(const DecInstance& inst, std::span<const WeightedEstimate> q) {
  const std::size_t n = inst.rho.size();
  if (inst.bids.size() != n || inst.rho_hat.size() != n) {
    throw DimensionError("DEC instance vectors differ in length");
  }
  if (!(inst.gamma >= 0.0)) throw ParameterError("gamma must be non-negative");
  double total_weight = 0.0;
  for (const auto& point : q) {
    if (!(point.weight >= 0.0)) throw ParameterError("distribution weights must be non-negative");
    if (point.estimates.size() != n) throw DimensionError("support point has wrong length");
    total_weight += point.weight;
  }
  if (std::abs(total_weight - 1.0) > 1e-9) throw ParameterError("distribution weights must sum to 1");

  const double oracle = oracle_round_revenue(inst.bids, inst.rho);
  double value = 0.0;
  for (const auto& point : q) {
    if (point.weight == 0.0) continue;
    const AuctionOutcome a = allocate(inst.bids, point.estimates);
    const std::size_t w = a.winner;
    const double payment = inst.rho[w] * a.price_per_click;
    const double err = inst.rho[w] - inst.rho_hat[w];
    value += point.weight * ((oracle - payment) - inst.gamma * err * err);
  }
  return value;
}

std::vector<WeightedEstimate> eps_greedy_dec_distribution(std::span<const double> rho_hat,
                                                          double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0,1]");
  const std::size_t n = rho_hat.size();
  if (n < 2) throw DimensionError("need at least two ads");
  std::vector<WeightedEstimate> q;
  q.reserve(n + 1);
  q.push_back({1.0 - epsilon, std::vector<double>(rho_hat.begin(), rho_hat.end())});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    q.push_back({epsilon / static_cast<double>(n), std::move(e)});
  }
  return q;
}

}  // namespace ppcauction
