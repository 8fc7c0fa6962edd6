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
#include <functional>
#include <span>
#include <vector>

namespace ppcauction {

// Observable context of one round: a shared column plus one feature column per
// ad, all of dimension `dim`. A non-contextual round has dim == 0 and still
// carries its ad count.
class ContextMatrix {
 public:
  ContextMatrix() = default;
  ContextMatrix(std::size_t dim, std::size_t num_ads);
  ContextMatrix(std::vector<double> common, std::vector<std::vector<double>> per_ad);

  static ContextMatrix non_contextual(std::size_t num_ads) { return ContextMatrix(0, num_ads); }

  std::size_t dim() const { return dim_; }
  std::size_t num_ads() const { return num_ads_; }

  std::span<const double> common() const { return common_; }
  std::span<double> common() { return common_; }
  std::span<const double> ad(std::size_t i) const;
  std::span<double> ad(std::size_t i);

  bool operator==(const ContextMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::size_t num_ads_ = 0;
  std::vector<double> common_;
  std::vector<double> per_ad_;  // num_ads_ x dim_, row-major
};

// Logistic function evaluated without overflow for large |u|.
double sigmoid(double u);

// f(x, i) = sigmoid(common_weights . x_0 + ad_weights . x_i), with every
// weight confined to [-bound, bound].
class SigmoidLinear {
 public:
  SigmoidLinear() = default;
  SigmoidLinear(std::size_t dim, double bound = 1.0);
  SigmoidLinear(std::vector<double> params, std::size_t dim, double bound = 1.0);

  // Uniform draw from the parameter box.
  template <class UniformFn>
  static SigmoidLinear random(std::size_t dim, double bound, UniformFn&& uniform01) {
    SigmoidLinear p(dim, bound);
    for (double& w : p.params_) w = -bound + 2.0 * bound * uniform01();
    return p;
  }

  std::size_t dim() const { return dim_; }
  double bound() const { return bound_; }

  // Layout: [common weights (dim) | ad weights (dim)].
  std::span<const double> params() const { return params_; }
  std::span<double> params() { return params_; }
  std::span<const double> common_weights() const { return {params_.data(), dim_}; }
  std::span<const double> ad_weights() const { return {params_.data() + dim_, dim_}; }

  double logit(const ContextMatrix& x, std::size_t ad) const;
  double predict(const ContextMatrix& x, std::size_t ad) const;
  void predict_all(const ContextMatrix& x, std::span<double> out) const;
  std::vector<double> predict_all(const ContextMatrix& x) const;

  // d f(x, ad) / d params = f (1 - f) (x_0, x_ad); accumulates scale * grad
  // into `out` (length 2 * dim).
  void accumulate_gradient(const ContextMatrix& x, std::size_t ad, double scale,
                           std::span<double> out) const;
  std::vector<double> predict_gradient(const ContextMatrix& x, std::size_t ad) const;

  // Projects every weight onto [-bound, bound]. Idempotent.
  void clamp();
  SigmoidLinear clamped() const;

  bool operator==(const SigmoidLinear&) const = default;

 private:
  void check(const ContextMatrix& x, std::size_t ad) const;

  std::size_t dim_ = 0;
  double bound_ = 1.0;
  std::vector<double> params_;
};

// An enumerable predictor class. Predictor k maps a context to a CTR per ad.
class FiniteClass {
 public:
  virtual ~FiniteClass() = default;
  virtual std::size_t size() const = 0;
  // Writes f_k(x, i) for i < x.num_ads() into out.
  virtual void predict_all(std::size_t k, const ContextMatrix& x, std::span<double> out) const = 0;

  double predict(std::size_t k, const ContextMatrix& x, std::size_t ad) const;
};

// Constant predictors theta in {0, 1/G, ..., 1}^N, enumerated lexicographically
// with the first ad as the most significant digit.
class DiscretizedConstantClass : public FiniteClass {
 public:
  static constexpr std::uint64_t kDefaultBudget = 1'000'000;

  // Throws CapacityError if (G + 1)^N exceeds `budget`.
  DiscretizedConstantClass(std::size_t grid_resolution, std::size_t num_ads,
                           std::uint64_t budget = kDefaultBudget);

  // (G + 1)^N, or nothing if it overflows 64 bits.
  static std::uint64_t count(std::size_t grid_resolution, std::size_t num_ads);

  std::size_t grid_resolution() const { return grid_; }
  std::size_t num_ads() const { return num_ads_; }
  std::size_t size() const override { return size_; }

  std::span<const double> theta(std::size_t k) const;
  void predict_all(std::size_t k, const ContextMatrix& x, std::span<double> out) const override;

 private:
  std::size_t grid_;
  std::size_t num_ads_;
  std::size_t size_;
  std::vector<double> table_;  // size_ x num_ads_
};

// Finite class backed by arbitrary callables (x, i) -> [0, 1].
class TableClass : public FiniteClass {
 public:
  using Predictor = std::function<double(const ContextMatrix&, std::size_t)>;

  explicit TableClass(std::vector<Predictor> predictors);
  // Constant predictors, one CTR vector each.
  static TableClass constants(const std::vector<std::vector<double>>& ctrs);

  std::size_t size() const override { return predictors_.size(); }
  void predict_all(std::size_t k, const ContextMatrix& x, std::span<double> out) const override;

 private:
  std::vector<Predictor> predictors_;
};

}  // namespace ppcauction
