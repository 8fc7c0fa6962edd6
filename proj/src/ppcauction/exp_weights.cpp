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

#include "ppcauction/exp_weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ppcauction/auction.hpp"
#include "ppcauction/error.hpp"

namespace ppcauction {

namespace {

// Winner and runner-up score of the auction f would run on these bids.
MaxSmax induced_auction(std::span<const double> f_values, std::span<const double> bids,
                        std::vector<double>& scratch) {
  if (f_values.size() != bids.size()) throw DimensionError("predictions and bids differ in length");
  scratch.resize(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) scratch[i] = bids[i] * f_values[i];
  return max_smax(scratch);
}

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("eta must lie in (0,1]");
}

void check_winner(const Feedback& fb, std::size_t n) {
  if (fb.winner >= n) throw DimensionError("winner index out of range");
}

}  // namespace

Estimator parse_estimator(std::string_view name) {
  if (name == "ips") return Estimator::kIps;
  if (name == "optsq") return Estimator::kOptSq;
  if (name == "sq" || name == "sq_ablation") return Estimator::kSq;
  throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::kIps: return "ips";
    case Estimator::kOptSq: return "optsq";
    case Estimator::kSq: return "sq_ablation";
  }
  return "?";
}

double ips_loss(std::span<const double> f_values, const Feedback& fb, double p_winner) {
  if (!(p_winner > 0.0)) throw ParameterError("IPS propensity must be positive");
  check_winner(fb, f_values.size());
  std::vector<double> scratch;
  const MaxSmax ms = induced_auction(f_values, fb.bids, scratch);
  if (ms.argmax != fb.winner) return 0.0;
  // All-zero scores: f would charge nothing, so the bracket is 1.
  const double ratio = ms.smax > 0.0 ? ms.smax / f_values[ms.argmax] : 0.0;
  return (1.0 - (fb.clicked ? ratio : 0.0)) / p_winner;
}

double sq_loss(std::span<const double> f_values, const Feedback& fb, double eta) {
  check_eta(eta);
  check_winner(fb, f_values.size());
  const double r = f_values[fb.winner] - (fb.clicked ? 1.0 : 0.0);
  return r * r / (4.0 * eta);
}

double optsq_loss(std::span<const double> f_values, const Feedback& fb, double eta) {
  const double sq = sq_loss(f_values, fb, eta);
  std::vector<double> scratch;
  return sq - induced_auction(f_values, fb.bids, scratch).smax;
}

std::vector<double> optsq_gradient(const SigmoidLinear& theta, const RoundObservation& obs,
                                   double eta, bool optimistic) {
  check_eta(eta);
  const std::size_t n = obs.context.num_ads();
  if (n < 2) throw DimensionError("optsq_gradient needs at least two ads");
  if (obs.bids.size() != n) throw DimensionError("bids and context differ in ad count");
  if (obs.winner >= n) throw DimensionError("winner index out of range");

  std::vector<double> grad(theta.params().size(), 0.0);
  const double f_win = theta.predict(obs.context, obs.winner);
  const double residual = f_win - (obs.clicked ? 1.0 : 0.0);
  theta.accumulate_gradient(obs.context, obs.winner, residual / (2.0 * eta), grad);
  if (optimistic) {
    const std::vector<double> f = theta.predict_all(obs.context);
    std::vector<double> scratch;
    const std::size_t k = induced_auction(f, obs.bids, scratch).argsmax;
    theta.accumulate_gradient(obs.context, k, -obs.bids[k], grad);
  }
  return grad;
}

std::size_t sample_index(std::span<const double> probabilities, double uniform_draw) {
  if (probabilities.empty()) throw DimensionError("cannot sample from an empty distribution");
  double total = 0.0;
  for (double p : probabilities) total += p;
  const double target = uniform_draw * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] <= 0.0) continue;
    cum += probabilities[k];
    last_positive = k;
    if (target < cum) return k;
  }
  return last_positive;
}

FiniteExpWeights::FiniteExpWeights(std::shared_ptr<const FiniteClass> cls, double eta,
                                   Estimator estimator)
    : class_(std::move(cls)), eta_(eta), estimator_(estimator) {
  if (!class_) throw ParameterError("predictor class is null");
  if (!(eta > 0.0)) throw ParameterError("learning rate must be positive");
  if (estimator != Estimator::kIps) check_eta(eta);
  losses_.assign(class_->size(), 0.0);
}

void FiniteExpWeights::set_cumulative_losses(std::vector<double> losses) {
  if (losses.size() != losses_.size()) throw DimensionError("one loss per predictor expected");
  losses_ = std::move(losses);
}

std::vector<double> FiniteExpWeights::distribution() const {
  const double lowest = *std::min_element(losses_.begin(), losses_.end());
  std::vector<double> q(losses_.size());
  double total = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    q[k] = std::exp(-eta_ * (losses_[k] - lowest));
    total += q[k];
  }
  for (double& v : q) v /= total;
  return q;
}

std::vector<double> FiniteExpWeights::winner_probabilities(std::span<const double> q,
                                                           const ContextMatrix& x,
                                                           std::span<const double> bids) const {
  if (q.size() != class_->size()) throw DimensionError("distribution length differs from class size");
  const std::size_t n = x.num_ads();
  if (bids.size() != n) throw DimensionError("bids and context differ in ad count");
  std::vector<double> p(n, 0.0);
  std::vector<double> f(n);
  std::vector<double> scratch;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k] == 0.0) continue;
    class_->predict_all(k, x, f);
    p[induced_auction(f, bids, scratch).argmax] += q[k];
  }
  return p;
}

void FiniteExpWeights::update(std::span<const double> q, const ContextMatrix& x, const Feedback& fb) {
  const std::size_t n = x.num_ads();
  if (fb.bids.size() != n) throw DimensionError("bids and context differ in ad count");
  check_winner(fb, n);
  std::vector<double> f(n);

  if (estimator_ != Estimator::kIps) {
    for (std::size_t k = 0; k < losses_.size(); ++k) {
      class_->predict_all(k, x, f);
      losses_[k] += estimator_ == Estimator::kOptSq ? optsq_loss(f, fb, eta_) : sq_loss(f, fb, eta_);
    }
    return;
  }

  // IPS: one pass for the induced auctions and the propensity, one for losses.
  struct Induced {
    std::size_t winner;
    double ratio;
  };
  std::vector<Induced> induced(losses_.size());
  std::vector<double> scratch;
  double p_winner = 0.0;
  for (std::size_t k = 0; k < losses_.size(); ++k) {
    class_->predict_all(k, x, f);
    const MaxSmax ms = induced_auction(f, fb.bids, scratch);
    induced[k] = {ms.argmax, ms.smax > 0.0 ? ms.smax / f[ms.argmax] : 0.0};
    if (ms.argmax == fb.winner) p_winner += q[k];
  }
  if (!(p_winner > 0.0)) throw StateError("realized winner has zero propensity");
  for (std::size_t k = 0; k < losses_.size(); ++k) {
    if (induced[k].winner != fb.winner) continue;
    losses_[k] += (1.0 - (fb.clicked ? induced[k].ratio : 0.0)) / p_winner;
  }
}

FiniteExpWeightsLearner::FiniteExpWeightsLearner(std::shared_ptr<const FiniteClass> cls, double eta,
                                                 Estimator estimator, Rng rng)
    : weights_(std::move(cls), eta, estimator), rng_(rng) {}

std::vector<double> FiniteExpWeightsLearner::propose(const ContextMatrix& context) {
  q_ = weights_.distribution();
  sampled_ = sample_index(q_, rng_.uniform());
  std::vector<double> est(context.num_ads());
  weights_.predictor_class().predict_all(sampled_, context, est);
  return est;
}

void FiniteExpWeightsLearner::observe(const RoundFeedback& fb) {
  if (q_.empty()) throw StateError("observe called before propose");
  weights_.update(q_, fb.context, {fb.bids, fb.outcome.winner, fb.outcome.clicked});
  q_.clear();
}

void sgld_step(SgldState& state, std::size_t t, std::size_t s, std::span<const double> noise) {
  if (s >= state.history.size()) throw StateError("history index out of range");
  auto params = state.theta.params();
  if (noise.size() != params.size()) throw DimensionError("noise vector has wrong length");
  const SgldConfig& c = state.config;
  const std::vector<double> g = optsq_gradient(state.theta, state.history[s], c.eta, c.optimistic);
  const double drift = c.alpha * c.eta;
  const double scale = std::sqrt(2.0 * c.alpha / static_cast<double>(t));
  for (std::size_t k = 0; k < params.size(); ++k) params[k] += -drift * g[k] + scale * noise[k];
  state.theta.clamp();
}

void sgld_round(SgldState& state, std::size_t t, Rng& rng) {
  if (t < 2) return;
  if (state.history.empty()) throw StateError("SGLD round " + std::to_string(t) + " has no history");
  if (state.config.restart) {
    state.theta = SigmoidLinear::random(state.theta.dim(), state.theta.bound(),
                                        [&] { return rng.uniform(); });
  }
  std::vector<double> noise(state.theta.params().size());
  // Samples s uniformly from the rounds observed so far.
  const std::size_t limit = std::min(state.history.size(), t - 1);
  for (std::size_t step = 0; step < state.config.steps_per_round; ++step) {
    const std::size_t s = static_cast<std::size_t>(rng.below(limit));
    rng.fill_normal(noise);
    sgld_step(state, t, s, noise);
  }
}

SgldLearner::SgldLearner(std::size_t dim, double bound, SgldConfig config, Rng rng) : rng_(rng) {
  check_eta(config.eta);
  if (!(config.alpha > 0.0)) throw ParameterError("SGLD step size must be positive");
  if (config.steps_per_round == 0) throw ParameterError("SGLD needs at least one step per round");
  state_.config = config;
  state_.theta = SigmoidLinear::random(dim, bound, [&] { return rng_.uniform(); });
}

std::vector<double> SgldLearner::propose(const ContextMatrix& context) {
  sgld_round(state_, round_, rng_);
  return state_.theta.predict_all(context);
}

void SgldLearner::observe(const RoundFeedback& fb) {
  state_.history.push_back({fb.context, fb.outcome.winner, fb.outcome.clicked,
                            std::vector<double>(fb.bids.begin(), fb.bids.end())});
  ++round_;
}

}  // namespace ppcauction
