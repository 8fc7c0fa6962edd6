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

#include "ppcauction/auction.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "ppcauction/error.hpp"

namespace ppcauction {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) throw DimensionError(std::string(what) + ": need at least two ads");
}

void check_unit(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ParameterError(std::string(what) + " must lie in [0,1], got " + std::to_string(v));
    }
  }
}

void check_bids(std::span<const double> bids) {
  for (double b : bids) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw ParameterError("bids must be finite and non-negative, got " + std::to_string(b));
    }
  }
}

}  // namespace

MaxSmax max_smax(std::span<const double> scores) {
  if (scores.size() < 2) throw DimensionError("max_smax: need at least two scores");
  MaxSmax r;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[r.argmax]) r.argmax = i;
  }
  r.argsmax = r.argmax == 0 ? 1 : 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != r.argmax && scores[i] > scores[r.argsmax]) r.argsmax = i;
  }
  r.max = scores[r.argmax];
  r.smax = scores[r.argsmax];
  return r;
}

AuctionOutcome allocate(std::span<const double> bids, std::span<const double> estimates) {
  check_pair(bids, estimates, "run_auction");
  check_bids(bids);
  check_unit(estimates, "estimated CTRs");

  std::vector<double> scores(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) scores[i] = bids[i] * estimates[i];
  const MaxSmax ms = max_smax(scores);

  AuctionOutcome out;
  out.winner = ms.argmax;
  out.runner_up = ms.argsmax;
  if (ms.smax > 0.0) {
    assert(estimates[out.winner] > 0.0);
    // On exact ties the quotient can round one ulp above the bid.
    out.price_per_click = std::min(ms.smax / estimates[out.winner], bids[out.winner]);
  }
  return out;
}

AuctionOutcome run_auction(std::span<const double> bids, std::span<const double> estimates,
                           double winner_ctr, double click_draw) {
  AuctionOutcome out = allocate(bids, estimates);
  if (!(winner_ctr >= 0.0 && winner_ctr <= 1.0)) throw ParameterError("true CTR must lie in [0,1]");
  out.clicked = click_draw < winner_ctr;
  out.payment = out.clicked ? out.price_per_click : 0.0;
  return out;
}

AuctionOutcome run_auction(std::span<const double> bids, std::span<const double> estimates,
                           std::span<const double> true_ctrs, double click_draw) {
  if (true_ctrs.size() != bids.size()) throw DimensionError("run_auction: true CTR length mismatch");
  const AuctionOutcome alloc = allocate(bids, estimates);
  return run_auction(bids, estimates, true_ctrs[alloc.winner], click_draw);
}

double oracle_round_revenue(std::span<const double> bids, std::span<const double> true_ctrs) {
  check_pair(bids, true_ctrs, "oracle_round_revenue");
  std::vector<double> products(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) products[i] = bids[i] * true_ctrs[i];
  return max_smax(products).smax;
}

void RegretLedger::record_round(double oracle_revenue, double payment) {
  if (!(oracle_revenue >= 0.0) || !std::isfinite(oracle_revenue)) {
    throw ParameterError("oracle revenue must be finite and non-negative");
  }
  if (!(payment >= 0.0) || !std::isfinite(payment)) {
    throw ParameterError("payment must be finite and non-negative");
  }
  records_.push_back({oracle_revenue, payment});
  cumulative_regret_ += oracle_revenue - payment;
}

std::vector<double> RegretLedger::regret_trace() const {
  std::vector<double> trace;
  trace.reserve(records_.size());
  double acc = 0.0;
  for (const auto& r : records_) {
    acc += r.oracle_revenue - r.payment;
    trace.push_back(acc);
  }
  return trace;
}

}  // namespace ppcauction
