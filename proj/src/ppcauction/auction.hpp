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
#include <span>
#include <vector>

namespace ppcauction {

// Largest and second-largest entry of a score vector.
//
// Ties go to the lowest index: `argmax` is the first index attaining the
// maximum and `argsmax` is the first index other than `argmax` attaining the
// maximum of the remaining entries. With ties the second-largest value may
// therefore equal the largest.
struct MaxSmax {
  std::size_t argmax = 0;
  std::size_t argsmax = 1;
  double max = 0.0;
  double smax = 0.0;
};

// Throws DimensionError if scores.size() < 2.
MaxSmax max_smax(std::span<const double> scores);

struct AuctionOutcome {
  std::size_t winner = 0;
  std::size_t runner_up = 1;
  double price_per_click = 0.0;
  bool clicked = false;
  double payment = 0.0;
};

// Second-price pay-per-click auction on scores bids[i] * estimates[i].
//
// The winner pays scores[runner_up] / estimates[winner] per click and is
// clicked iff click_draw < true_ctrs[winner]. If every score is zero the
// winner is ad 0 and the price is 0.
AuctionOutcome run_auction(std::span<const double> bids, std::span<const double> estimates,
                           std::span<const double> true_ctrs, double click_draw);
// Same, given only the winner's true CTR.
AuctionOutcome run_auction(std::span<const double> bids, std::span<const double> estimates,
                           double winner_ctr, double click_draw);

// Winner/runner-up/price without the click step.
AuctionOutcome allocate(std::span<const double> bids, std::span<const double> estimates);

// Expected revenue of the perfect-knowledge auction: smax_i bids[i] * true_ctrs[i].
double oracle_round_revenue(std::span<const double> bids, std::span<const double> true_ctrs);

// Per-round oracle revenue and realized payment, with the running regret.
class RegretLedger {
 public:
  struct Record {
    double oracle_revenue;
    double payment;
  };

  void record_round(double oracle_revenue, double payment);

  double cumulative_regret() const { return cumulative_regret_; }
  std::size_t rounds() const { return records_.size(); }
  const std::vector<Record>& records() const { return records_; }

  // Cumulative regret after each recorded round.
  std::vector<double> regret_trace() const;

 private:
  std::vector<Record> records_;
  double cumulative_regret_ = 0.0;
};

}  // namespace ppcauction
