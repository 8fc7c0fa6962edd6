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

#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "ppcauction/auction.hpp"
#include "ppcauction/error.hpp"
#include "ppcauction/regression.hpp"
#include "ppcauction/rng.hpp"

using namespace ppcauction;

namespace {

ContextMatrix random_context(Rng& rng, std::size_t dim, std::size_t n) {
  ContextMatrix x(dim, n);
  for (double& v : x.common()) v = rng.uniform(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (double& v : x.ad(i)) v = rng.uniform(-1.0, 1.0);
  return x;
}

}  // namespace

TEST_SUITE("regression") {

TEST_CASE("OGD step by hand") {
  OgdOracle o(SigmoidLinear(1), 0.005);
  o.observe(ContextMatrix({1.0}, {{1.0}, {1.0}}), 0, true);
  CHECK(o.current_predictor().params()[0] == doctest::Approx(0.00125).epsilon(1e-15));
  CHECK(o.current_predictor().params()[1] == doctest::Approx(0.00125).epsilon(1e-15));

  OgdOracle z(SigmoidLinear({0.3, -0.4, 0.1, 0.2}, 2), 0.5);
  const auto before = z.current_predictor();
  z.observe(ContextMatrix(2, 3), 2, false);
  CHECK(z.current_predictor() == before);

  CHECK_THROWS_AS(z.observe(ContextMatrix(2, 3), 3, false), DimensionError);
}

TEST_CASE("OGD stays in the box") {
  OgdOracle o(SigmoidLinear({0.99, -0.99}, 1), 50.0);
  o.observe(ContextMatrix({1.0}, {{-1.0}, {1.0}}), 0, true);
  for (double w : o.current_predictor().params()) {
    CHECK(w <= 1.0);
    CHECK(w >= -1.0);
  }
}

TEST_CASE("squared error gradient matches finite differences") {
  Rng rng(7);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + rng.below(8), n = 2 + rng.below(5);
    const auto theta = SigmoidLinear::random(d, 1.0, [&] { return rng.uniform(); });
    const auto x = random_context(rng, d, n);
    const std::size_t ad = rng.below(n);
    const bool c = rng.uniform() < 0.5;
    const auto g = squared_error_gradient(theta, x, ad, c);
    for (std::size_t k = 0; k < 2 * d; ++k) {
      SigmoidLinear up = theta, dn = theta;
      up.params()[k] += h;
      dn.params()[k] -= h;
      auto loss = [&](const SigmoidLinear& p) { return std::pow(p.predict(x, ad) - (c ? 1.0 : 0.0), 2); };
      const double fd = (loss(up) - loss(dn)) / (2 * h);
      const double scale = std::max({std::abs(fd), std::abs(g[k]), 1e-6});
      CHECK(std::abs(g[k] - fd) / scale <= 1e-4);
    }
  }
}

TEST_CASE("choose_estimates examples") {
  Rng rng(2);
  const auto x = random_context(rng, 3, 3);
  const auto p = SigmoidLinear::random(3, 1.0, [&] { return rng.uniform(); });

  ExplorationPolicy greedy{0.0, ExplorationMode::kOneHot, 0.1};
  CHECK(choose_estimates(greedy, p, x, 0.0, 1) == p.predict_all(x));

  ExplorationPolicy always{1.0, ExplorationMode::kOneHot, 0.1};
  CHECK(choose_estimates(always, p, x, 0.999, 2) == std::vector<double>{0, 0, 1});

  ExplorationPolicy mix{1.0, ExplorationMode::kSigmaMixture, 0.2};
  const auto two = random_context(rng, 3, 2);
  const auto e = choose_estimates(mix, p, two, 0.3, 0);
  CHECK(e[0] == 1.0);
  CHECK(e[1] == doctest::Approx(0.1).epsilon(1e-15));

  ExplorationPolicy half{0.5, ExplorationMode::kOneHot, 0.1};
  CHECK(choose_estimates(half, p, x, 0.49, 0) == std::vector<double>{1, 0, 0});
  CHECK(choose_estimates(half, p, x, 0.5, 0) == p.predict_all(x));

  CHECK_THROWS_AS((ExplorationPolicy{1.5, ExplorationMode::kOneHot, 0.1}.validate()), ParameterError);
  CHECK_THROWS_AS((ExplorationPolicy{0.5, ExplorationMode::kSigmaMixture, 0.0}.validate()), ParameterError);
  CHECK(parse_exploration_mode("sigma_mixture") == ExplorationMode::kSigmaMixture);
  CHECK_THROWS_AS(parse_exploration_mode("wild"), ConfigError);
}

TEST_CASE("sigma mixture always hands the round to the drawn ad") {
  Rng rng(3);
  for (int trial = 0; trial < 20000; ++trial) {
    const double sigma = 0.05 + 0.95 * rng.uniform();
    const std::size_t n = 2 + rng.below(9);
    std::vector<double> b(n);
    for (double& v : b) v = rng.uniform(sigma, 1.0);
    const std::size_t ad = rng.below(n);
    const auto e = exploration_estimates({1.0, ExplorationMode::kSigmaMixture, sigma}, n, ad);
    const auto o = allocate(b, e);
    REQUIRE(o.winner == ad);
    // at least sigma^2 / 2 per click
    CHECK(o.price_per_click >= sigma * sigma / 2 - 1e-15);
  }
}

TEST_CASE("one-hot exploration rounds pay nothing") {
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    std::vector<double> b(n);
    for (double& v : b) v = rng.uniform(0.1, 1.0);
    const auto e = exploration_estimates({1.0, ExplorationMode::kOneHot, 0.1}, n, rng.below(n));
    CHECK(run_auction(b, e, 1.0, 0.0).payment == 0.0);
  }
}

TEST_CASE("the oracle never depends on bids") {
  Rng rng(5);
  auto make = [] {
    return EpsGreedyLearner(std::make_unique<OgdOracle>(SigmoidLinear(3), 0.05),
                            {0.3, ExplorationMode::kOneHot, 0.1}, Rng(9));
  };
  EpsGreedyLearner a = make(), b = make();
  for (int t = 0; t < 200; ++t) {
    const auto x = random_context(rng, 3, 4);
    const auto ea = a.propose(x), eb = b.propose(x);
    REQUIRE(ea == eb);
    std::vector<double> bids_a(4), bids_b(4);
    for (double& v : bids_a) v = rng.uniform(0.1, 1.0);
    for (double& v : bids_b) v = rng.uniform(0.1, 1.0);
    // same winner and click delivered under two different bid vectors
    AuctionOutcome o = allocate(bids_a, ea);
    o.clicked = rng.uniform() < 0.5;
    a.observe({x, bids_a, ea, o});
    b.observe({x, bids_b, eb, o});
    REQUIRE(*a.parametric_state() == *b.parametric_state());
  }
}

TEST_CASE("DEC objective examples") {
  DecInstance same{{0.3, 0.6, 0.8}, {0.5, 0.9, 0.2}, {0.3, 0.6, 0.8}, 7.0};
  std::vector<WeightedEstimate> point{{1.0, same.rho}};
  CHECK(dec_objective(same, point) == doctest::Approx(0.0).epsilon(1e-15));

  DecInstance hand{{0.5, 0.5}, {1, 1}, {0.5, 0.5}, 4.0};
  std::vector<WeightedEstimate> hot{{1.0, {1.0, 0.0}}};
  CHECK(dec_objective(hand, hot) == doctest::Approx(0.5).epsilon(1e-15));

  // gamma = 0: expected per-round regret only
  Rng rng(6);
  DecInstance r{{0.2, 0.9, 0.4}, {0.8, 0.3, 0.6}, {0.1, 0.5, 0.5}, 0.0};
  std::vector<WeightedEstimate> q{{0.25, {0.3, 0.3, 0.9}}, {0.75, {0.9, 0.1, 0.4}}};
  double want = 0;
  for (const auto& w : q) {
    const auto o = allocate(r.bids, w.estimates);
    want += w.weight * (oracle_round_revenue(r.bids, r.rho) - r.rho[o.winner] * o.price_per_click);
  }
  CHECK(dec_objective(r, q) == doctest::Approx(want).epsilon(1e-15));

  std::vector<WeightedEstimate> bad{{0.5, {0.3, 0.3, 0.9}}};
  CHECK_THROWS_AS(dec_objective(r, bad), ParameterError);
}

TEST_CASE("epsilon-greedy DEC distribution") {
  const std::vector<double> rho_hat{0.4, 0.7};
  auto q = eps_greedy_dec_distribution(rho_hat, 0.5);
  REQUIRE(q.size() == 3);
  CHECK(q[0].weight == 0.5);
  CHECK(q[0].estimates == rho_hat);
  CHECK(q[1].weight == 0.25);
  CHECK(q[1].estimates == std::vector<double>{1, 0});
  CHECK(q[2].weight == 0.25);
  CHECK(q[2].estimates == std::vector<double>{0, 1});

  q = eps_greedy_dec_distribution(std::vector<double>{0.1, 0.2, 0.3}, 1.0);
  double total = 0;
  for (const auto& w : q) {
    if (w.estimates == std::vector<double>{0.1, 0.2, 0.3}) CHECK(w.weight == 0.0);
    total += w.weight;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(eps_greedy_dec_distribution(rho_hat, 0.0), ParameterError);
}

TEST_CASE("theoretical epsilon") {
  CHECK(theoretical_epsilon(1000, 5, 8.0) == doctest::Approx(std::cbrt(40.0) / 10.0).epsilon(1e-14));
  CHECK(theoretical_epsilon(8, 10, 100.0) == 1.0);
}

}  // TEST_SUITE
