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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppcauction/auction.hpp"
#include "ppcauction/predictors.hpp"

namespace ppcauction {

// What the learner sees after the auction of a round has run.
struct RoundFeedback {
  const ContextMatrix& context;
  std::span<const double> bids;
  std::span<const double> estimates;
  const AuctionOutcome& outcome;
};

// A CTR-estimation strategy. `propose` is called before the bids of the round
// are revealed and never receives them.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::vector<double> propose(const ContextMatrix& context) = 0;
  virtual void observe(const RoundFeedback& feedback) = 0;

  // Current parameters for parametric learners, written to run outputs.
  virtual std::optional<SigmoidLinear> parametric_state() const { return std::nullopt; }
};

}  // namespace ppcauction
