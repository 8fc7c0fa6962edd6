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

#include "ppcauction/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ppcauction/error.hpp"

namespace ppcauction {

ContextMatrix::ContextMatrix(std::size_t dim, std::size_t num_ads)
    : dim_(dim), num_ads_(num_ads), common_(dim, 0.0), per_ad_(dim * num_ads, 0.0) {}

ContextMatrix::ContextMatrix(std::vector<double> common, std::vector<std::vector<double>> per_ad)
    : dim_(common.size()), num_ads_(per_ad.size()), common_(std::move(common)) {
  per_ad_.reserve(dim_ * num_ads_);
  for (const auto& column : per_ad) {
    if (column.size() != dim_) throw DimensionError("ContextMatrix: ragged ad columns");
    per_ad_.insert(per_ad_.end(), column.begin(), column.end());
  }
}

std::span<const double> ContextMatrix::ad(std::size_t i) const {
  if (i >= num_ads_) throw DimensionError("ad index " + std::to_string(i) + " out of range");
  return {per_ad_.data() + i * dim_, dim_};
}

std::span<double> ContextMatrix::ad(std::size_t i) {
  if (i >= num_ads_) throw DimensionError("ad index " + std::to_string(i) + " out of range");
  return {per_ad_.data() + i * dim_, dim_};
}

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

SigmoidLinear::SigmoidLinear(std::size_t dim, double bound)
    : dim_(dim), bound_(bound), params_(2 * dim, 0.0) {
  if (!(bound > 0.0)) throw ParameterError("parameter bound must be positive");
}

SigmoidLinear::SigmoidLinear(std::vector<double> params, std::size_t dim, double bound)
    : dim_(dim), bound_(bound), params_(std::move(params)) {
  if (!(bound > 0.0)) throw ParameterError("parameter bound must be positive");
  if (params_.size() != 2 * dim) throw DimensionError("SigmoidLinear: expected 2*dim parameters");
}

void SigmoidLinear::check(const ContextMatrix& x, std::size_t ad) const {
  if (x.dim() != dim_) {
    throw DimensionError("context dimension " + std::to_string(x.dim()) +
                         " does not match predictor dimension " + std::to_string(dim_));
  }
  if (ad >= x.num_ads()) throw DimensionError("ad index " + std::to_string(ad) + " out of range");
}

double SigmoidLinear::logit(const ContextMatrix& x, std::size_t ad) const {
  check(x, ad);
  const auto x0 = x.common();
  const auto xi = x.ad(ad);
  double u = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) u += params_[k] * x0[k] + params_[dim_ + k] * xi[k];
  return u;
}

double SigmoidLinear::predict(const ContextMatrix& x, std::size_t ad) const {
  return sigmoid(logit(x, ad));
}

void SigmoidLinear::predict_all(const ContextMatrix& x, std::span<double> out) const {
  if (out.size() != x.num_ads()) throw DimensionError("predict_all: output length mismatch");
  if (x.dim() != dim_) throw DimensionError("predict_all: context dimension mismatch");
  const auto x0 = x.common();
  double shared = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) shared += params_[k] * x0[k];
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto xi = x.ad(i);
    double u = shared;
    for (std::size_t k = 0; k < dim_; ++k) u += params_[dim_ + k] * xi[k];
    out[i] = sigmoid(u);
  }
}

std::vector<double> SigmoidLinear::predict_all(const ContextMatrix& x) const {
  std::vector<double> out(x.num_ads());
  predict_all(x, out);
  return out;
}

void SigmoidLinear::accumulate_gradient(const ContextMatrix& x, std::size_t ad, double scale,
                                        std::span<double> out) const {
  if (out.size() != params_.size()) throw DimensionError("gradient buffer has wrong length");
  const double f = predict(x, ad);
  const double w = scale * f * (1.0 - f);
  if (w == 0.0) return;
  const auto x0 = x.common();
  const auto xi = x.ad(ad);
  for (std::size_t k = 0; k < dim_; ++k) {
    out[k] += w * x0[k];
    out[dim_ + k] += w * xi[k];
  }
}

std::vector<double> SigmoidLinear::predict_gradient(const ContextMatrix& x, std::size_t ad) const {
  std::vector<double> g(params_.size(), 0.0);
  accumulate_gradient(x, ad, 1.0, g);
  return g;
}

void SigmoidLinear::clamp() {
  for (double& w : params_) w = std::clamp(w, -bound_, bound_);
}

SigmoidLinear SigmoidLinear::clamped() const {
  SigmoidLinear copy = *this;
  copy.clamp();
  return copy;
}

double FiniteClass::predict(std::size_t k, const ContextMatrix& x, std::size_t ad) const {
  std::vector<double> out(x.num_ads());
  predict_all(k, x, out);
  if (ad >= out.size()) throw DimensionError("ad index out of range");
  return out[ad];
}

std::uint64_t DiscretizedConstantClass::count(std::size_t grid_resolution, std::size_t num_ads) {
  const std::uint64_t base = static_cast<std::uint64_t>(grid_resolution) + 1;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < num_ads; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= base;
  }
  return total;
}

DiscretizedConstantClass::DiscretizedConstantClass(std::size_t grid_resolution, std::size_t num_ads,
                                                   std::uint64_t budget)
    : grid_(grid_resolution), num_ads_(num_ads) {
  if (grid_resolution == 0) throw ParameterError("grid resolution must be positive");
  if (num_ads == 0) throw ParameterError("discretized class needs at least one ad");
  const std::uint64_t required = count(grid_resolution, num_ads);
  if (required > budget) {
    throw CapacityError("discretized constant class needs " + std::to_string(required) +
                            " predictors, budget is " + std::to_string(budget),
                        required);
  }
  size_ = static_cast<std::size_t>(required);
  table_.resize(size_ * num_ads_);
  const double step = 1.0 / static_cast<double>(grid_);
  for (std::size_t k = 0; k < size_; ++k) {
    std::size_t rest = k;
    for (std::size_t i = num_ads_; i-- > 0;) {
      const std::size_t digit = rest % (grid_ + 1);
      rest /= grid_ + 1;
      table_[k * num_ads_ + i] = digit == grid_ ? 1.0 : static_cast<double>(digit) * step;
    }
  }
}

std::span<const double> DiscretizedConstantClass::theta(std::size_t k) const {
  if (k >= size_) throw DimensionError("predictor index out of range");
  return {table_.data() + k * num_ads_, num_ads_};
}

void DiscretizedConstantClass::predict_all(std::size_t k, const ContextMatrix& x,
                                           std::span<double> out) const {
  if (x.num_ads() > num_ads_ || out.size() != x.num_ads()) {
    throw DimensionError("round has more ads than the discretized class covers");
  }
  const auto th = theta(k);
  std::copy_n(th.begin(), out.size(), out.begin());
}

TableClass::TableClass(std::vector<Predictor> predictors) : predictors_(std::move(predictors)) {
  if (predictors_.empty()) throw ParameterError("finite class must contain a predictor");
}

TableClass TableClass::constants(const std::vector<std::vector<double>>& ctrs) {
  std::vector<Predictor> fs;
  fs.reserve(ctrs.size());
  for (const auto& v : ctrs) {
    for (double c : v) {
      if (!(c >= 0.0 && c <= 1.0)) throw ParameterError("predictor output outside [0,1]");
    }
    fs.emplace_back([v](const ContextMatrix&, std::size_t i) {
      if (i >= v.size()) throw DimensionError("ad index out of range");
      return v[i];
    });
  }
  return TableClass(std::move(fs));
}

void TableClass::predict_all(std::size_t k, const ContextMatrix& x, std::span<double> out) const {
  if (k >= predictors_.size()) throw DimensionError("predictor index out of range");
  if (out.size() != x.num_ads()) throw DimensionError("predict_all: output length mismatch");
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = predictors_[k](x, i);
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("predictor output outside [0,1]");
    out[i] = v;
  }
}

}  // namespace ppcauction
