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

#include <cstdint>
#include <span>

namespace ppcauction {

// Identifier written next to every output so traces can be regenerated by
// another implementation of the same generator.
inline constexpr const char* kRngAlgorithm = "xoshiro256**+splitmix64-substreams/v1";

// Independent substreams derived from one master seed.
enum class Stream : std::uint64_t {
  kContext = 1,
  kBids = 2,
  kFakeCtr = 3,
  kFit = 4,
  kClicks = 5,
  kLearner = 6,
  kInstance = 7,
};

// SplitMix64 (Steele, Lea, Flood). Used for seeding and stream derivation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t operator()();

  // Stateless finalizer of a single value.
  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
};

// xoshiro256** with portable uniform and Gaussian variates. The standard
// library distributions are implementation-defined, so they are not used.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  // Substream `stream` of `master_seed`; distinct (seed, stream) pairs give
  // statistically independent sequences.
  static Rng substream(std::uint64_t master_seed, Stream stream);
  static Rng substream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer on [0, n); n > 0. Unbiased (rejection).
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal();
  void fill_normal(std::span<double> out);

 private:
  std::uint64_t s_[4];
};

}  // namespace ppcauction
