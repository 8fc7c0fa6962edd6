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

#include "ppcauction/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ppcauction/auction.hpp"
#include "ppcauction/error.hpp"
#include "ppcauction/numfmt.hpp"
#include "ppcauction/rng.hpp"

namespace ppcauction {

namespace {

constexpr std::string_view kTraceMagic = "# ppcauction-trace v1";

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

// Mean squared error of `model` against `targets` and (optionally) its gradient.
double fit_loss(const SigmoidLinear& model, const std::vector<Round>& rounds,
                const std::vector<std::vector<double>>& targets, std::vector<double>* grad) {
  double loss = 0.0;
  std::size_t count = 0;
  if (grad) std::fill(grad->begin(), grad->end(), 0.0);
  std::vector<double> f;
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    const auto& x = rounds[t].context;
    f.resize(x.num_ads());
    model.predict_all(x, f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = f[i] - targets[t][i];
      loss += r * r;
      ++count;
      if (grad) model.accumulate_gradient(x, i, 2.0 * r, *grad);
    }
  }
  if (grad) {
    for (double& g : *grad) g /= static_cast<double>(count);
  }
  return loss / static_cast<double>(count);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

std::vector<double> split_doubles(std::string_view s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse_double(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

EnvironmentKind parse_environment_kind(std::string_view name) {
  if (name == "synthetic") return EnvironmentKind::kSynthetic;
  if (name == "hard_instance") return EnvironmentKind::kHardInstance;
  if (name == "stationary") return EnvironmentKind::kStationary;
  throw ConfigError("unknown environment kind '" + std::string(name) + "'");
}

std::string_view to_string(EnvironmentKind kind) {
  switch (kind) {
    case EnvironmentKind::kSynthetic: return "synthetic";
    case EnvironmentKind::kHardInstance: return "hard_instance";
    case EnvironmentKind::kStationary: return "stationary";
  }
  return "?";
}

void SyntheticConfig::validate() const {
  require(horizon > 0, "synthetic environment needs a positive horizon");
  require(dim > 0, "feature dimension must be positive");
  require(min_ads >= 2 && min_ads <= max_ads, "ad-count range must satisfy 2 <= min <= max");
  require(bid_low > 0.0 && bid_low <= bid_high && bid_high <= bid_max,
          "bid range must satisfy 0 < low <= high <= bid_max");
  require(lowest_ctr_bid >= 0.0 && lowest_ctr_bid <= bid_max, "override bid must lie in [0, bid_max]");
  require(fake_ctr_low >= 0.0 && fake_ctr_low <= fake_ctr_high && fake_ctr_high <= 1.0,
          "fake CTR range must lie in [0,1]");
  require(param_bound > 0.0, "parameter bound must be positive");
  require(fit_step > 0.0, "fit step must be positive");
}

void HardInstanceConfig::validate() const {
  if (num_ads < 3 || horizon < num_ads) {
    throw ParameterError("hard instance requires T >= N >= 3 (got N=" + std::to_string(num_ads) +
                         ", T=" + std::to_string(horizon) + ")");
  }
}

void StationaryConfig::validate() const {
  require(horizon > 0, "stationary environment needs a positive horizon");
  require(num_ads >= 2, "stationary environment needs at least two ads");
  require(ctr_low >= 0.0 && ctr_low <= ctr_high && ctr_high <= 1.0, "CTR range must lie in [0,1]");
  require(bid_low >= 0.0 && bid_low <= bid_high, "bid range is empty");
}

std::size_t EnvironmentTrace::max_ads() const {
  std::size_t n = 0;
  for (const auto& r : rounds) n = std::max(n, r.num_ads());
  return n;
}

EnvironmentTrace generate_synthetic(const SyntheticConfig& c, std::uint64_t seed, FitReport* report) {
  c.validate();
  Rng ctx_rng = Rng::substream(seed, Stream::kContext);
  Rng bid_rng = Rng::substream(seed, Stream::kBids);
  Rng fake_rng = Rng::substream(seed, Stream::kFakeCtr);
  Rng fit_rng = Rng::substream(seed, Stream::kFit);

  EnvironmentTrace env;
  env.kind = EnvironmentKind::kSynthetic;
  env.seed = seed;
  env.bid_max = c.bid_max;
  env.rounds.resize(c.horizon);
  std::vector<std::vector<double>> fake(c.horizon);

  for (std::size_t t = 0; t < c.horizon; ++t) {
    Round& r = env.rounds[t];
    const std::size_t n = c.min_ads + ctx_rng.below(c.max_ads - c.min_ads + 1);
    r.context = ContextMatrix(c.dim, n);
    for (double& v : r.context.common()) v = ctx_rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : r.context.ad(i)) v = ctx_rng.uniform(-1.0, 1.0);
    }
    r.bids.resize(n);
    for (double& b : r.bids) b = bid_rng.uniform(c.bid_low, c.bid_high);
    fake[t].resize(n);
    for (double& y : fake[t]) y = fake_rng.uniform(c.fake_ctr_low, c.fake_ctr_high);
  }

  // Full-batch projected gradient descent from a random point of the box.
  SigmoidLinear model = SigmoidLinear::random(c.dim, c.param_bound, [&] { return fit_rng.uniform(); });
  std::vector<double> grad(model.params().size());
  const double initial = fit_loss(model, env.rounds, fake, &grad);
  double loss = initial;
  for (std::size_t epoch = 0; epoch < c.fit_epochs; ++epoch) {
    auto params = model.params();
    for (std::size_t k = 0; k < params.size(); ++k) params[k] -= c.fit_step * grad[k];
    model.clamp();
    const double next = fit_loss(model, env.rounds, fake, &grad);
    if (!std::isfinite(next) || next > loss * (1.0 + 1e-9) + 1e-15) {
      std::ostringstream msg;
      msg << "ground-truth fit diverged at epoch " << epoch + 1 << ": loss " << loss << " -> "
          << next << " (step " << c.fit_step << ", initial loss " << initial << ")";
      throw FitError(msg.str());
    }
    loss = next;
  }
  if (report) *report = {initial, loss, c.fit_epochs};

  // The fitted model is the ground truth; the fake targets are dropped.
  for (Round& r : env.rounds) {
    r.true_ctr = model.predict_all(r.context);
    const auto lowest = std::min_element(r.true_ctr.begin(), r.true_ctr.end()) - r.true_ctr.begin();
    r.bids[static_cast<std::size_t>(lowest)] = c.lowest_ctr_bid;
  }
  env.truth = std::move(model);
  return env;
}

double hard_instance_gap(std::size_t num_ads, std::size_t horizon) {
  return 0.25 * std::sqrt(static_cast<double>(num_ads) / static_cast<double>(horizon));
}

EnvironmentTrace hard_instance(const HardInstanceConfig& c, std::uint64_t seed) {
  c.validate();
  Rng rng = Rng::substream(seed, Stream::kInstance);
  const std::size_t i = static_cast<std::size_t>(rng.below(c.num_ads));
  std::size_t j = static_cast<std::size_t>(rng.below(c.num_ads - 1));
  if (j >= i) ++j;

  EnvironmentTrace env;
  env.kind = EnvironmentKind::kHardInstance;
  env.seed = seed;
  env.epsilon_gap = hard_instance_gap(c.num_ads, c.horizon);
  env.elevated = std::pair{std::min(i, j), std::max(i, j)};
  env.fixed_ctr.assign(c.num_ads, 0.5);
  env.fixed_ctr[i] = 0.5 + env.epsilon_gap;
  env.fixed_ctr[j] = 0.5 + env.epsilon_gap;
  env.rounds.assign(c.horizon, Round{ContextMatrix::non_contextual(c.num_ads),
                                     std::vector<double>(c.num_ads, 1.0), env.fixed_ctr});
  return env;
}

EnvironmentTrace stationary_instance(const StationaryConfig& c, std::uint64_t seed) {
  c.validate();
  Rng inst_rng = Rng::substream(seed, Stream::kInstance);
  Rng bid_rng = Rng::substream(seed, Stream::kBids);

  EnvironmentTrace env;
  env.kind = EnvironmentKind::kStationary;
  env.seed = seed;
  env.bid_max = std::max(1.0, c.bid_high);
  env.fixed_ctr.resize(c.num_ads);
  for (double& v : env.fixed_ctr) v = inst_rng.uniform(c.ctr_low, c.ctr_high);
  env.rounds.resize(c.horizon);
  for (Round& r : env.rounds) {
    r.context = ContextMatrix::non_contextual(c.num_ads);
    r.bids.resize(c.num_ads);
    for (double& b : r.bids) b = bid_rng.uniform(c.bid_low, c.bid_high);
    r.true_ctr = env.fixed_ctr;
  }
  return env;
}

bool sample_click(double true_ctr, double uniform_draw) {
  if (!(true_ctr >= 0.0 && true_ctr <= 1.0)) throw ParameterError("CTR must lie in [0,1]");
  return uniform_draw < true_ctr;
}

std::vector<double> oracle_baseline_trace(const EnvironmentTrace& env) {
  std::vector<double> out;
  out.reserve(env.rounds.size());
  for (const auto& r : env.rounds) out.push_back(oracle_round_revenue(r.bids, r.true_ctr));
  return out;
}

void save_trace(const EnvironmentTrace& env, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  const std::size_t d = env.dim();
  os << kTraceMagic << '\n';
  os << "# kind=" << to_string(env.kind) << '\n';
  os << "# seed=" << env.seed << '\n';
  os << "# rng=" << kRngAlgorithm << '\n';
  os << "# bid_max=" << format_double(env.bid_max) << '\n';
  if (!env.config_json.empty()) os << "# config=" << env.config_json << '\n';
  if (env.truth) {
    os << "# truth_class=sigmoid_linear\n";
    os << "# truth_dim=" << env.truth->dim() << '\n';
    os << "# truth_bound=" << format_double(env.truth->bound()) << '\n';
    os << "# truth_params="
       << join(std::vector<double>(env.truth->params().begin(), env.truth->params().end())) << '\n';
  }
  if (!env.fixed_ctr.empty()) {
    os << "# truth_class=constant\n";
    os << "# truth_ctr=" << join(env.fixed_ctr) << '\n';
  }
  if (env.elevated) {
    os << "# elevated=" << env.elevated->first << ',' << env.elevated->second << '\n';
    os << "# epsilon_gap=" << format_double(env.epsilon_gap) << '\n';
  }
  os << "round,ad,num_ads,bid,true_ctr";
  for (std::size_t k = 0; k < d; ++k) os << ",x0_" << k;
  for (std::size_t k = 0; k < d; ++k) os << ",xa_" << k;
  os << '\n';
  for (std::size_t t = 0; t < env.rounds.size(); ++t) {
    const Round& r = env.rounds[t];
    for (std::size_t i = 0; i < r.num_ads(); ++i) {
      os << t << ',' << i << ',' << r.num_ads() << ',' << format_double(r.bids[i]) << ','
         << format_double(r.true_ctr[i]);
      for (double v : r.context.common()) os << ',' << format_double(v);
      for (double v : r.context.ad(i)) os << ',' << format_double(v);
      os << '\n';
    }
  }
  if (!os) throw IoError("failed writing '" + path + "'");
}

EnvironmentTrace load_trace(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open trace '" + path + "'");
  std::string line;
  if (!std::getline(is, line) || line != kTraceMagic) throw IoError("'" + path + "' is not a trace file");

  std::map<std::string, std::string, std::less<>> header;
  std::string columns;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) != 0) {
      columns = line;
      break;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw IoError("malformed trace header line: " + line);
    header[line.substr(2, eq - 2)] = line.substr(eq + 1);
  }
  auto get = [&](const char* key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) throw IoError(std::string("trace header lacks '") + key + "'");
    return it->second;
  };

  EnvironmentTrace env;
  env.kind = parse_environment_kind(get("kind"));
  env.seed = parse_int<std::uint64_t>(get("seed"));
  env.bid_max = parse_double(get("bid_max"));
  if (header.count("config")) env.config_json = header["config"];
  if (header.count("truth_params")) {
    env.truth = SigmoidLinear(split_doubles(get("truth_params")),
                              parse_int<std::size_t>(get("truth_dim")),
                              parse_double(get("truth_bound")));
  }
  if (header.count("truth_ctr")) env.fixed_ctr = split_doubles(get("truth_ctr"));
  if (header.count("elevated")) {
    const auto pair = split_doubles(get("elevated"));
    if (pair.size() != 2) throw IoError("malformed elevated pair");
    env.elevated = std::pair{static_cast<std::size_t>(pair[0]), static_cast<std::size_t>(pair[1])};
    env.epsilon_gap = parse_double(get("epsilon_gap"));
  }

  const std::size_t ncols = static_cast<std::size_t>(std::count(columns.begin(), columns.end(), ',')) + 1;
  if (ncols < 5 || (ncols - 5) % 2 != 0) throw IoError("malformed trace column header");
  const std::size_t d = (ncols - 5) / 2;

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<double> v = split_doubles(line);
    if (v.size() != ncols) throw IoError("trace row has " + std::to_string(v.size()) + " fields");
    const auto t = static_cast<std::size_t>(v[0]);
    const auto i = static_cast<std::size_t>(v[1]);
    const auto n = static_cast<std::size_t>(v[2]);
    if (t != env.rounds.size() - (i == 0 ? 0 : 1)) throw IoError("trace rows out of order");
    if (i == 0) {
      Round r;
      r.context = ContextMatrix(d, n);
      r.bids.resize(n);
      r.true_ctr.resize(n);
      std::copy_n(v.begin() + 5, d, r.context.common().begin());
      env.rounds.push_back(std::move(r));
    }
    Round& r = env.rounds.back();
    if (n != r.num_ads() || i >= n) throw IoError("inconsistent ad count in round " + std::to_string(t));
    r.bids[i] = v[3];
    r.true_ctr[i] = v[4];
    std::copy_n(v.begin() + 5 + d, d, r.context.ad(i).begin());
  }
  return env;
}

}  // namespace ppcauction
