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
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "ppcauction/learner.hpp"
#include "ppcauction/predictors.hpp"
#include "ppcauction/rng.hpp"

namespace ppcauction {

// Online squared-error regression over the predictor class. The oracle commits
// to a predictor before each observation and only ever receives the tuple
// (context, displayed ad, click).
class RegressionOracle {
 public:
  virtual ~RegressionOracle() = default;
  virtual const SigmoidLinear& current_predictor() const = 0;
  virtual void observe(const ContextMatrix& x, std::size_t ad, bool clicked) = 0;
};

// Projected online gradient descent on (f(x, i) - c)^2.
class OgdOracle : public RegressionOracle {
 public:
  OgdOracle(SigmoidLinear initial, double step);

  const SigmoidLinear& current_predictor() const override { return theta_; }
  void observe(const ContextMatrix& x, std::size_t ad, bool clicked) override;

  double step() const { return step_; }

 private:
  SigmoidLinear theta_;
  double step_;
};

// Gradient of (f_theta(x, ad) - c)^2 with respect to the parameters.
std::vector<double> squared_error_gradient(const SigmoidLinear& theta, const ContextMatrix& x,
                                           std::size_t ad, bool clicked);

enum class ExplorationMode { kOneHot, kSigmaMixture };

ExplorationMode parse_exploration_mode(std::string_view name);

struct ExplorationPolicy {
  double epsilon = 0.1;
  ExplorationMode mode = ExplorationMode::kOneHot;
  double sigma = 0.1;  // minimum bid; only used by kSigmaMixture

  void validate() const;
};

// Exploration vector for ad `ad`: e_ad, or (sigma/2) 1 + (1 - sigma/2) e_ad.
std::vector<double> exploration_estimates(const ExplorationPolicy& policy, std::size_t num_ads,
                                          std::size_t ad);

// Explores (returns the exploration vector for `ad_draw`) iff explore_draw <
// epsilon; otherwise returns the predictor's CTRs.
std::vector<double> choose_estimates(const ExplorationPolicy& policy, const SigmoidLinear& predictor,
                                     const ContextMatrix& x, double explore_draw,
                                     std::size_t ad_draw);

// Epsilon-greedy over a regression oracle. The bids of a round never reach the
// oracle.
class EpsGreedyLearner : public Learner {
 public:
  EpsGreedyLearner(std::unique_ptr<RegressionOracle> oracle, ExplorationPolicy policy, Rng rng);

  std::vector<double> propose(const ContextMatrix& context) override;
  void observe(const RoundFeedback& feedback) override;
  std::optional<SigmoidLinear> parametric_state() const override {
    return oracle_->current_predictor();
  }

  const RegressionOracle& oracle() const { return *oracle_; }
  bool explored_last_round() const { return explored_; }

 private:
  std::unique_ptr<RegressionOracle> oracle_;
  ExplorationPolicy policy_;
  Rng rng_;
  bool explored_ = false;
};

// Epsilon from the theoretical schedule T^{-1/3} (N * reg_sq)^{1/3}, capped at 1.
double theoretical_epsilon(std::size_t horizon, std::size_t num_ads, double reg_sq);

struct WeightedEstimate {
  double weight;
  std::vector<double> estimates;
};

struct DecInstance {
  std::vector<double> rho;      // true CTRs
  std::vector<double> bids;
  std::vector<double> rho_hat;  // oracle prediction
  double gamma;
};

// E_{est ~ Q}[ smax_i b_i rho_i - rho_{i*} smax_j b_j est_j / est_{i*}
//              - gamma (rho_{i*} - rho_hat_{i*})^2 ],  i* = argmax_i b_i est_i,
// with the auction's tie rule and zero payment when every score is zero.
double dec_objective(const DecInstance& instance, std::span<const WeightedEstimate> q);

// Weight 1 - epsilon on rho_hat and epsilon / N on each e_i.
std::vector<WeightedEstimate> eps_greedy_dec_distribution(std::span<const double> rho_hat,
                                                          double epsilon);

}  // namespace ppcauction
