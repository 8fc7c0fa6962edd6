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

// Loss estimator plugged into exponential weights.
//   kIps:   inverse-propensity estimate of 1 - (payment when following f).
//   kOptSq: (f(x, i_t) - c_t)^2 / (4 eta) - smax_j b_j f(x, j).
//   kSq:    kOptSq without the optimism bonus.
enum class Estimator { kIps, kOptSq, kSq };

Estimator parse_estimator(std::string_view name);
std::string_view to_string(Estimator e);

// Bids, winner and click of a finished round.
struct Feedback {
  std::span<const double> bids;
  std::size_t winner;
  bool clicked;
};

// Owning copy of a round's feedback, kept in the SGLD history.
struct RoundObservation {
  ContextMatrix context;
  std::size_t winner = 0;
  bool clicked = false;
  std::vector<double> bids;

  Feedback feedback() const { return {bids, winner, clicked}; }
};

// `f_values` are a predictor's CTRs for every ad of the round.
double ips_loss(std::span<const double> f_values, const Feedback& fb, double p_winner);
double optsq_loss(std::span<const double> f_values, const Feedback& fb, double eta);
double sq_loss(std::span<const double> f_values, const Feedback& fb, double eta);

// Gradient of the OptSq (or, with optimistic == false, the Sq) loss of the
// sigmoid-linear predictor `theta` on one observation. Where the runner-up of
// bids * f_theta is tied, the lowest-index runner-up is used.
std::vector<double> optsq_gradient(const SigmoidLinear& theta, const RoundObservation& obs,
                                   double eta, bool optimistic = true);

// Inverse-CDF draw from a categorical distribution. Entries with zero weight
// are never returned.
std::size_t sample_index(std::span<const double> probabilities, double uniform_draw);

// Exponential weights over a finite class with exact propensities.
class FiniteExpWeights {
 public:
  FiniteExpWeights(std::shared_ptr<const FiniteClass> cls, double eta, Estimator estimator);

  const FiniteClass& predictor_class() const { return *class_; }
  double eta() const { return eta_; }
  Estimator estimator() const { return estimator_; }

  // q_t proportional to exp(-eta * cumulative loss), normalized in log space.
  std::vector<double> distribution() const;
  std::size_t sample(double uniform_draw) const { return sample_index(distribution(), uniform_draw); }

  const std::vector<double>& cumulative_losses() const { return losses_; }
  void set_cumulative_losses(std::vector<double> losses);

  // p_i = total q-mass of predictors whose induced winner is ad i.
  std::vector<double> winner_probabilities(std::span<const double> q, const ContextMatrix& x,
                                           std::span<const double> bids) const;

  // Adds this round's loss estimate for every predictor. `q` is the
  // distribution the round's predictor was sampled from.
  void update(std::span<const double> q, const ContextMatrix& x, const Feedback& fb);

 private:
  std::shared_ptr<const FiniteClass> class_;
  double eta_;
  Estimator estimator_;
  std::vector<double> losses_;
};

class FiniteExpWeightsLearner : public Learner {
 public:
  FiniteExpWeightsLearner(std::shared_ptr<const FiniteClass> cls, double eta, Estimator estimator,
                          Rng rng);

  std::vector<double> propose(const ContextMatrix& context) override;
  void observe(const RoundFeedback& feedback) override;

  const FiniteExpWeights& weights() const { return weights_; }
  std::size_t last_sampled() const { return sampled_; }

 private:
  FiniteExpWeights weights_;
  Rng rng_;
  std::vector<double> q_;
  std::size_t sampled_ = 0;
};

struct SgldConfig {
  double eta = 0.25;
  double alpha = 0.001;
  std::size_t steps_per_round = 32;
  bool restart = false;     // re-draw theta from the box before every round
  bool optimistic = true;   // false gives the Sq ablation
};

struct SgldState {
  SigmoidLinear theta;
  SgldConfig config;
  std::vector<RoundObservation> history;
};

// One Langevin step at round t using history item s:
//   theta <- clamp(theta - alpha eta grad_s + sqrt(2 alpha / t) noise).
void sgld_step(SgldState& state, std::size_t t, std::size_t s, std::span<const double> noise);

// The per-round chain of steps_per_round updates. For each step the history
// index is drawn first, then the Gaussian noise vector. At t == 1 nothing is
// updated. Throws StateError if t >= 2 and the history is empty.
void sgld_round(SgldState& state, std::size_t t, Rng& rng);

class SgldLearner : public Learner {
 public:
  SgldLearner(std::size_t dim, double bound, SgldConfig config, Rng rng);

  std::vector<double> propose(const ContextMatrix& context) override;
  void observe(const RoundFeedback& feedback) override;
  std::optional<SigmoidLinear> parametric_state() const override { return state_.theta; }

  const SgldState& state() const { return state_; }

 private:
  SgldState state_;
  Rng rng_;
  std::size_t round_ = 1;
};

}  // namespace ppcauction
