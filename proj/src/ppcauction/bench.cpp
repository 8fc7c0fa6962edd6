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

#include "ppcauction/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ppcauction/auction.hpp"
#include "ppcauction/error.hpp"
#include "ppcauction/exp_weights.hpp"
#include "ppcauction/numfmt.hpp"
#include "ppcauction/regression.hpp"

namespace ppcauction {

namespace {

// What a learner needs to know about the environment it will face.
struct EnvironmentShape {
  bool contextual = true;
  std::size_t dim = 0;
  std::size_t max_ads = 0;
  std::size_t horizon = 0;
  double total_ads = 0.0;  // sum over rounds of N_t
  double param_bound = 1.0;
};

EnvironmentShape shape_of(const EnvironmentTrace& env) {
  EnvironmentShape s;
  s.contextual = env.kind == EnvironmentKind::kSynthetic;
  s.dim = env.dim();
  s.max_ads = env.max_ads();
  s.horizon = env.horizon();
  for (const auto& r : env.rounds) s.total_ads += static_cast<double>(r.num_ads());
  if (env.truth) s.param_bound = env.truth->bound();
  return s;
}

EnvironmentShape shape_of(const EnvironmentSpec& spec) {
  EnvironmentShape s;
  s.contextual = spec.contextual();
  s.horizon = spec.horizon();
  switch (spec.kind) {
    case EnvironmentKind::kSynthetic:
      s.dim = spec.synthetic.dim;
      s.max_ads = spec.synthetic.max_ads;
      s.total_ads = 0.5 * static_cast<double>(spec.synthetic.min_ads + spec.synthetic.max_ads) *
                    static_cast<double>(s.horizon);
      s.param_bound = spec.synthetic.param_bound;
      break;
    case EnvironmentKind::kHardInstance:
      s.max_ads = spec.hard.num_ads;
      s.total_ads = static_cast<double>(s.max_ads * s.horizon);
      break;
    case EnvironmentKind::kStationary:
      s.max_ads = spec.stationary.num_ads;
      s.total_ads = static_cast<double>(s.max_ads * s.horizon);
      break;
  }
  return s;
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

const std::set<std::string> kAlgorithmTypes = {"sgld", "eps_greedy", "finite_exp_weights",
                                                "fixed_ctr", "random_ctr"};

std::unique_ptr<Learner> build_learner(const AlgorithmSpec& spec, const Json& hp,
                                       const EnvironmentShape& shape, Rng rng) {
  const double bound = get_or(hp, "param_bound", shape.param_bound);
  if ((spec.type == "sgld" || spec.type == "eps_greedy") && !shape.contextual) {
    throw ConfigError(spec.id + ": the sigmoid-linear class needs a contextual environment");
  }
  if (spec.type == "sgld") {
    const Estimator est = parse_estimator(get_or<std::string>(hp, "estimator", "optsq"));
    if (est == Estimator::kIps) {
      throw ConfigError(spec.id + ": the IPS estimator needs a finite predictor class");
    }
    SgldConfig c;
    c.eta = get_or(hp, "eta", c.eta);
    c.alpha = get_or(hp, "alpha", c.alpha);
    c.steps_per_round = get_or<std::size_t>(hp, "steps_per_round", c.steps_per_round);
    c.restart = get_or(hp, "sgld_restart", c.restart);
    c.optimistic = est == Estimator::kOptSq;
    return std::make_unique<SgldLearner>(shape.dim, bound, c, rng);
  }
  if (spec.type == "eps_greedy") {
    ExplorationPolicy policy;
    const double base = std::cbrt(1.0 / static_cast<double>(std::max<std::size_t>(shape.horizon, 1)));
    if (hp.contains("epsilon")) {
      policy.epsilon = get_or(hp, "epsilon", policy.epsilon);
    } else if (hp.contains("epsilon_scale")) {
      policy.epsilon = get_or(hp, "epsilon_scale", 1.0) * base;
    } else if (hp.contains("reg_sq")) {
      policy.epsilon = theoretical_epsilon(shape.horizon, shape.max_ads, get_or(hp, "reg_sq", 0.0));
    } else {
      policy.epsilon = base;
    }
    policy.mode = parse_exploration_mode(get_or<std::string>(hp, "mode", "one_hot"));
    policy.sigma = get_or(hp, "sigma", policy.sigma);
    const double step = get_or(hp, "ogd_step", 0.005);
    auto oracle = std::make_unique<OgdOracle>(SigmoidLinear(shape.dim, bound), step);
    return std::make_unique<EpsGreedyLearner>(std::move(oracle), policy, rng);
  }
  if (spec.type == "finite_exp_weights") {
    if (shape.contextual) {
      throw ConfigError(spec.id + ": finite exponential weights runs on the discretized constant "
                                  "class and needs a non-contextual environment");
    }
    const Estimator est = parse_estimator(get_or<std::string>(hp, "estimator", "ips"));
    const auto grid = get_or<std::size_t>(hp, "grid_resolution", shape.horizon);
    const auto budget = get_or<std::uint64_t>(hp, "budget", DiscretizedConstantClass::kDefaultBudget);
    auto cls = std::make_shared<DiscretizedConstantClass>(grid, shape.max_ads, budget);
    double eta = 0.0;
    if (hp.contains("eta") && hp.at("eta").is_string()) {
      if (hp.at("eta") != "theory") throw ConfigError(spec.id + ": eta must be a number or \"theory\"");
      eta = std::sqrt(std::log(static_cast<double>(cls->size())) / shape.total_ads);
    } else {
      eta = get_or(hp, "eta", 0.1);
    }
    return std::make_unique<FiniteExpWeightsLearner>(std::move(cls), eta, est, rng);
  }
  if (spec.type == "fixed_ctr") return std::make_unique<FixedCtrLearner>(get_or(hp, "value", 0.5));
  if (spec.type == "random_ctr") return std::make_unique<RandomCtrLearner>(rng);
  throw ConfigError("unknown algorithm type '" + spec.type + "'");
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

Json predictor_json(const SigmoidLinear& p) {
  return Json{{"class", "sigmoid_linear"},
              {"dim", p.dim()},
              {"bound", p.bound()},
              {"params", std::vector<double>(p.params().begin(), p.params().end())}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw IoError("failed writing '" + path + "'");
}

}  // namespace

std::vector<double> baseline_fixed_ctr(const ContextMatrix& context, double value) {
  if (context.num_ads() < 2) throw DimensionError("a round needs at least two ads");
  return std::vector<double>(context.num_ads(), value);
}

std::vector<double> baseline_random_ctr(std::size_t num_ads, Rng& rng) {
  if (num_ads < 2) throw DimensionError("a round needs at least two ads");
  std::vector<double> est(num_ads);
  for (double& v : est) v = rng.uniform();
  return est;
}

FixedCtrLearner::FixedCtrLearner(double value) : value_(value) {
  if (!(value > 0.0 && value <= 1.0)) throw ParameterError("fixed CTR must lie in (0,1]");
}

std::vector<double> FixedCtrLearner::propose(const ContextMatrix& context) {
  return baseline_fixed_ctr(context, value_);
}

std::vector<double> RandomCtrLearner::propose(const ContextMatrix& context) {
  return baseline_random_ctr(context.num_ads(), rng_);
}

EnvironmentSpec EnvironmentSpec::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("'environment' must be an object");
  EnvironmentSpec s;
  s.raw = j;
  s.kind = parse_environment_kind(get_or<std::string>(j, "kind", "synthetic"));
  switch (s.kind) {
    case EnvironmentKind::kSynthetic: {
      reject_unknown_keys(j,
                          {"kind", "dim", "horizon", "min_ads", "max_ads", "bid_low", "bid_high",
                           "fake_ctr_low", "fake_ctr_high", "lowest_ctr_bid", "bid_max",
                           "param_bound", "fit_epochs", "fit_step"},
                          "synthetic environment");
      SyntheticConfig& c = s.synthetic;
      c.dim = get_or(j, "dim", c.dim);
      c.horizon = get_or(j, "horizon", c.horizon);
      c.min_ads = get_or(j, "min_ads", c.min_ads);
      c.max_ads = get_or(j, "max_ads", c.max_ads);
      c.bid_low = get_or(j, "bid_low", c.bid_low);
      c.bid_high = get_or(j, "bid_high", c.bid_high);
      c.fake_ctr_low = get_or(j, "fake_ctr_low", c.fake_ctr_low);
      c.fake_ctr_high = get_or(j, "fake_ctr_high", c.fake_ctr_high);
      c.lowest_ctr_bid = get_or(j, "lowest_ctr_bid", c.lowest_ctr_bid);
      c.bid_max = get_or(j, "bid_max", c.bid_max);
      c.param_bound = get_or(j, "param_bound", c.param_bound);
      c.fit_epochs = get_or(j, "fit_epochs", c.fit_epochs);
      c.fit_step = get_or(j, "fit_step", c.fit_step);
      c.validate();
      break;
    }
    case EnvironmentKind::kHardInstance:
      reject_unknown_keys(j, {"kind", "num_ads", "horizon"}, "hard_instance environment");
      s.hard.num_ads = get_or(j, "num_ads", s.hard.num_ads);
      s.hard.horizon = get_or(j, "horizon", s.hard.horizon);
      try {
        s.hard.validate();
      } catch (const ParameterError& e) {
        throw ConfigError(e.what());
      }
      break;
    case EnvironmentKind::kStationary: {
      reject_unknown_keys(j, {"kind", "num_ads", "horizon", "ctr_low", "ctr_high", "bid_low", "bid_high"},
                          "stationary environment");
      StationaryConfig& c = s.stationary;
      c.num_ads = get_or(j, "num_ads", c.num_ads);
      c.horizon = get_or(j, "horizon", c.horizon);
      c.ctr_low = get_or(j, "ctr_low", c.ctr_low);
      c.ctr_high = get_or(j, "ctr_high", c.ctr_high);
      c.bid_low = get_or(j, "bid_low", c.bid_low);
      c.bid_high = get_or(j, "bid_high", c.bid_high);
      c.validate();
      break;
    }
  }
  return s;
}

std::size_t EnvironmentSpec::horizon() const {
  switch (kind) {
    case EnvironmentKind::kSynthetic: return synthetic.horizon;
    case EnvironmentKind::kHardInstance: return hard.horizon;
    case EnvironmentKind::kStationary: return stationary.horizon;
  }
  return 0;
}

double EnvironmentSpec::min_bid() const {
  switch (kind) {
    case EnvironmentKind::kSynthetic: return std::min(synthetic.bid_low, synthetic.lowest_ctr_bid);
    case EnvironmentKind::kHardInstance: return 1.0;
    case EnvironmentKind::kStationary: return stationary.bid_low;
  }
  return 0.0;
}

EnvironmentTrace EnvironmentSpec::build(std::uint64_t seed) const {
  EnvironmentTrace env;
  switch (kind) {
    case EnvironmentKind::kSynthetic: env = generate_synthetic(synthetic, seed); break;
    case EnvironmentKind::kHardInstance: env = hard_instance(hard, seed); break;
    case EnvironmentKind::kStationary: env = stationary_instance(stationary, seed); break;
  }
  env.config_json = raw.dump();
  return env;
}

AlgorithmSpec AlgorithmSpec::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("each algorithm must be an object");
  reject_unknown_keys(j, {"id", "type", "params", "grid"}, "algorithm");
  AlgorithmSpec s;
  s.type = get_or<std::string>(j, "type", "");
  if (!kAlgorithmTypes.count(s.type)) throw ConfigError("unknown algorithm type '" + s.type + "'");
  s.id = get_or<std::string>(j, "id", s.type);
  if (s.id.empty() || s.id.find_first_of(",\"\n") != std::string::npos) {
    throw ConfigError("algorithm id must be non-empty and free of commas and quotes");
  }
  if (j.contains("params")) s.params = j.at("params");
  if (j.contains("grid")) s.grid = j.at("grid");
  if (!s.params.is_object()) throw ConfigError(s.id + ": 'params' must be an object");
  if (!s.grid.is_object()) throw ConfigError(s.id + ": 'grid' must be an object");
  for (const auto& [key, values] : s.grid.items()) {
    if (!values.is_array() || values.empty()) {
      throw ConfigError(s.id + ": grid entry '" + key + "' must be a non-empty list");
    }
  }
  return s;
}

std::vector<Json> AlgorithmSpec::grid_points() const {
  std::vector<Json> points{params};
  for (const auto& [key, values] : grid.items()) {
    std::vector<Json> next;
    next.reserve(points.size() * values.size());
    for (const Json& p : points) {
      for (const Json& v : values) {
        Json q = p;
        q[key] = v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j, {"name", "environment", "algorithms", "seeds", "record_stride", "selection",
                          "output"},
                      "config");
  ExperimentConfig c;
  c.raw = j;
  c.name = get_or<std::string>(j, "name", c.name);
  if (!j.contains("environment")) throw ConfigError("config lacks 'environment'");
  c.environment = EnvironmentSpec::from_json(j.at("environment"));
  if (!j.contains("algorithms") || !j.at("algorithms").is_array()) {
    throw ConfigError("config needs an 'algorithms' list");
  }
  for (const Json& a : j.at("algorithms")) c.algorithms.push_back(AlgorithmSpec::from_json(a));
  c.seeds = get_or<std::vector<std::uint64_t>>(j, "seeds", {});
  c.record_stride = get_or<std::size_t>(j, "record_stride", 0);
  const auto sel = get_or<std::string>(j, "selection", "joint");
  if (sel == "joint") {
    c.selection = Selection::kJoint;
  } else if (sel == "per_seed") {
    c.selection = Selection::kPerSeed;
  } else {
    throw ConfigError("selection must be 'joint' or 'per_seed'");
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    reject_unknown_keys(o, {"round_log", "write_traces"}, "output");
    c.round_log = get_or(o, "round_log", false);
    c.write_traces = get_or(o, "write_traces", false);
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config '" + path + "'");
  try {
    return from_json(Json::parse(is));
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

std::size_t ExperimentConfig::stride() const {
  if (record_stride > 0) return record_stride;
  return std::max<std::size_t>(1, environment.horizon() / 200);
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("config lists no algorithms");
  if (seeds.empty()) throw ConfigError("config lists no seeds");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seeds must be distinct");
  }
  std::set<std::string> ids;
  for (const auto& a : algorithms) {
    if (!ids.insert(a.id).second) throw ConfigError("duplicate algorithm id '" + a.id + "'");
  }
  const EnvironmentShape shape = shape_of(environment);
  for (const auto& a : algorithms) {
    for (const Json& hp : a.grid_points()) {
      try {
        build_learner(a, hp, shape, Rng(0));
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(a.id + " " + hp.dump() + ": " + e.what());
      } catch (const Json::exception& e) {
        throw ConfigError(a.id + " " + hp.dump() + ": " + e.what());
      }
      if (a.type == "eps_greedy" && get_or<std::string>(hp, "mode", "one_hot") == "sigma_mixture" &&
          get_or(hp, "sigma", 0.1) > environment.min_bid()) {
        throw ConfigError(a.id + ": sigma exceeds the environment's minimum bid");
      }
    }
  }
}

void apply_override(Json& config, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key=value, got '" + assignment + "'");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  Json* node = &config;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("empty segment in override key '" + path + "'");
    Json* child = nullptr;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = parse_int<std::size_t>(key);
      } catch (const IoError&) {
        throw ConfigError("override segment '" + key + "' must index a list");
      }
      if (idx >= node->size()) throw ConfigError("override index " + key + " out of range");
      child = &(*node)[idx];
    } else {
      if (node->is_null()) *node = Json::object();
      if (!node->is_object()) throw ConfigError("override path '" + path + "' crosses a scalar");
      child = &(*node)[key];
    }
    if (dot == std::string::npos) {
      *child = value;
      return;
    }
    node = child;
    start = dot + 1;
  }
}

std::unique_ptr<Learner> make_learner(const AlgorithmSpec& spec, const Json& hyperparameters,
                                      const EnvironmentTrace& env, Rng rng) {
  return build_learner(spec, hyperparameters, shape_of(env), rng);
}

RunResult run_episode(const EnvironmentTrace& env, Learner& learner, std::uint64_t seed,
                      std::size_t stride, bool log_rounds) {
  if (stride == 0) throw ParameterError("record stride must be positive");
  Rng clicks = Rng::substream(seed, Stream::kClicks);
  RegretLedger ledger;
  RunResult result;
  result.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  const std::size_t horizon = env.rounds.size();
  for (std::size_t t = 0; t < horizon; ++t) {
    const Round& r = env.rounds[t];
    const std::vector<double> est = learner.propose(r.context);
    if (est.size() != r.num_ads()) throw StateError("learner proposed the wrong number of CTRs");
    const AuctionOutcome outcome = run_auction(r.bids, est, r.true_ctr, clicks.uniform());
    const double oracle = oracle_round_revenue(r.bids, r.true_ctr);
    ledger.record_round(oracle, outcome.payment);
    learner.observe({r.context, r.bids, est, outcome});
    if (log_rounds) {
      result.rounds.push_back({t + 1, oracle, outcome.payment, outcome.winner, outcome.clicked});
    }
    if ((t + 1) % stride == 0 || t + 1 == horizon) {
      result.trace.emplace_back(t + 1, ledger.cumulative_regret());
    }
  }
  result.final_regret = ledger.cumulative_regret();
  result.final_predictor = learner.parametric_state();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers,
                                const EnvironmentTrace* replay) {
  config.validate();
  workers = std::max(1u, workers);

  ExperimentResult out;
  out.traces.resize(config.seeds.size());

  struct Task {
    std::size_t algorithm;
    std::size_t grid_id;
    std::size_t seed_index;
  };
  std::vector<Task> tasks;
  std::vector<std::vector<Json>> points;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    points.push_back(config.algorithms[a].grid_points());
    for (std::size_t g = 0; g < points[a].size(); ++g) {
      for (std::size_t s = 0; s < config.seeds.size(); ++s) tasks.push_back({a, g, s});
    }
  }

  auto parallel_for = [workers](std::size_t count, auto&& body) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    };
    std::vector<std::thread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  };

  parallel_for(config.seeds.size(), [&](std::size_t s) {
    out.traces[s] = replay ? *replay : config.environment.build(config.seeds[s]);
  });

  out.runs.resize(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t k) {
    const Task& task = tasks[k];
    const AlgorithmSpec& spec = config.algorithms[task.algorithm];
    const std::uint64_t seed = config.seeds[task.seed_index];
    const EnvironmentTrace& env = out.traces[task.seed_index];
    const Json& hp = points[task.algorithm][task.grid_id];
    auto learner = make_learner(spec, hp, env, Rng::substream(seed, Stream::kLearner));
    RunResult r = run_episode(env, *learner, seed, config.stride(), config.round_log);
    r.algorithm = spec.id;
    r.grid_id = task.grid_id;
    r.hyperparameters = hp;
    out.runs[k] = std::move(r);
  });
  return out;
}

Summary summarize(const std::vector<RunResult>& runs, Selection selection) {
  // Group by algorithm in first-appearance order, then grid id, then seed.
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, std::map<std::uint64_t, const RunResult*>>> groups;
  for (const auto& r : runs) {
    if (!groups.count(r.algorithm)) order.push_back(r.algorithm);
    groups[r.algorithm][r.grid_id][r.seed] = &r;
  }

  Summary summary;
  for (const std::string& alg : order) {
    const auto& by_grid = groups[alg];
    std::vector<const RunResult*> chosen;
    std::vector<std::size_t> best_ids;
    if (selection == Selection::kJoint) {
      std::size_t best = by_grid.begin()->first;
      double best_mean = INFINITY;
      for (const auto& [grid_id, by_seed] : by_grid) {
        double sum = 0.0;
        for (const auto& [seed, run] : by_seed) sum += run->final_regret;
        const double mean = sum / static_cast<double>(by_seed.size());
        if (mean < best_mean) {
          best_mean = mean;
          best = grid_id;
        }
      }
      best_ids.push_back(best);
      for (const auto& [seed, run] : by_grid.at(best)) chosen.push_back(run);
    } else {
      std::map<std::uint64_t, const RunResult*> best_by_seed;
      for (const auto& [grid_id, by_seed] : by_grid) {
        for (const auto& [seed, run] : by_seed) {
          auto& slot = best_by_seed[seed];
          if (!slot || run->final_regret < slot->final_regret) slot = run;
        }
      }
      for (const auto& [seed, run] : best_by_seed) {
        chosen.push_back(run);
        best_ids.push_back(run->grid_id);
      }
    }
    summary.best.emplace_back(alg, best_ids);

    const std::size_t points = chosen.front()->trace.size();
    for (const RunResult* r : chosen) {
      if (r->trace.size() != points) throw StateError(alg + ": runs recorded different rounds");
    }
    const double n = static_cast<double>(chosen.size());
    for (std::size_t p = 0; p < points; ++p) {
      double sum = 0.0;
      for (const RunResult* r : chosen) sum += r->trace[p].second;
      const double mean = sum / n;
      double ss = 0.0;
      for (const RunResult* r : chosen) ss += (r->trace[p].second - mean) * (r->trace[p].second - mean);
      const double sd = chosen.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      summary.rows.push_back({alg, chosen.front()->trace[p].first, mean, sd});
    }
  }
  return summary;
}

void write_results_csv(const std::vector<RunResult>& runs, const std::string& path) {
  std::ostringstream os;
  os << "algorithm,grid_id,seed,round,cum_regret\n";
  for (const auto& r : runs) {
    for (const auto& [round, regret] : r.trace) {
      os << quote_csv(r.algorithm) << ',' << r.grid_id << ',' << r.seed << ',' << round << ','
         << format_double(regret) << '\n';
    }
  }
  write_text(path, os.str());
}

std::vector<RunResult> read_results_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open results '" + path + "'");
  std::string line;
  if (!std::getline(is, line) || line != "algorithm,grid_id,seed,round,cum_regret") {
    throw IoError("'" + path + "' is not a results file");
  }
  std::vector<RunResult> runs;
  std::map<std::tuple<std::string, std::size_t, std::uint64_t>, std::size_t> index;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 5) throw IoError(path + ":" + std::to_string(lineno) + ": expected 5 fields");
    const auto key = std::make_tuple(f[0], parse_int<std::size_t>(f[1]), parse_int<std::uint64_t>(f[2]));
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, runs.size()).first;
      RunResult r;
      r.algorithm = f[0];
      r.grid_id = std::get<1>(key);
      r.seed = std::get<2>(key);
      runs.push_back(std::move(r));
    }
    RunResult& r = runs[it->second];
    r.trace.emplace_back(parse_int<std::size_t>(f[3]), parse_double(f[4]));
    r.final_regret = r.trace.back().second;
  }
  return runs;
}

void write_summary_csv(const Summary& summary, const std::string& path) {
  std::ostringstream os;
  os << "algorithm,round,mean,std\n";
  for (const auto& row : summary.rows) {
    os << quote_csv(row.algorithm) << ',' << row.round << ',' << format_double(row.mean) << ','
       << format_double(row.std) << '\n';
  }
  write_text(path, os.str());
}

void write_round_log_csv(const std::vector<RunResult>& runs, const std::string& path) {
  std::ostringstream os;
  os << "algorithm,grid_id,seed,round,oracle_revenue,payment,winner,clicked\n";
  for (const auto& r : runs) {
    for (const auto& l : r.rounds) {
      os << quote_csv(r.algorithm) << ',' << r.grid_id << ',' << r.seed << ',' << l.round << ','
         << format_double(l.oracle_revenue) << ',' << format_double(l.payment) << ',' << l.winner
         << ',' << (l.clicked ? 1 : 0) << '\n';
    }
  }
  write_text(path, os.str());
}

void write_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                      const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  const fs::path base(dir);

  write_results_csv(result.runs, (base / "results.csv").string());
  const Summary summary = summarize(result.runs, config.selection);
  write_summary_csv(summary, (base / "summary.csv").string());
  if (config.round_log) write_round_log_csv(result.runs, (base / "rounds.csv").string());
  if (config.write_traces) {
    for (std::size_t s = 0; s < result.traces.size(); ++s) {
      save_trace(result.traces[s], (base / ("trace_seed" + std::to_string(config.seeds[s]) + ".csv")).string());
    }
  }

  Json sidecar;
  sidecar["name"] = config.name;
  sidecar["config"] = config.raw;
  sidecar["rng"] = kRngAlgorithm;
  sidecar["record_stride"] = config.stride();
  sidecar["selection"] = config.selection == Selection::kJoint ? "joint" : "per_seed";
  Json grids = Json::object();
  for (const auto& a : config.algorithms) {
    Json list = Json::array();
    const auto pts = a.grid_points();
    for (std::size_t g = 0; g < pts.size(); ++g) list.push_back({{"grid_id", g}, {"params", pts[g]}});
    grids[a.id] = list;
  }
  sidecar["grids"] = grids;
  Json best = Json::object();
  for (const auto& [alg, ids] : summary.best) best[alg] = ids;
  sidecar["best_grid"] = best;
  Json env = Json::array();
  for (const auto& t : result.traces) {
    Json e{{"seed", t.seed}, {"kind", to_string(t.kind)}, {"horizon", t.horizon()}};
    if (t.truth) e["truth"] = predictor_json(*t.truth);
    if (!t.fixed_ctr.empty()) e["truth"] = Json{{"class", "constant"}, {"ctr", t.fixed_ctr}};
    env.push_back(e);
  }
  sidecar["environments"] = env;
  Json runs = Json::array();
  Json timings = Json::array();
  for (const auto& r : result.runs) {
    Json j{{"algorithm", r.algorithm}, {"grid_id", r.grid_id}, {"seed", r.seed},
           {"final_regret", r.final_regret}};
    if (r.final_predictor) j["final_predictor"] = predictor_json(*r.final_predictor);
    runs.push_back(j);
    timings.push_back({{"algorithm", r.algorithm}, {"grid_id", r.grid_id}, {"seed", r.seed},
                       {"wall_seconds", r.wall_seconds}});
  }
  sidecar["runs"] = runs;
  write_text((base / "run.json").string(), sidecar.dump(2) + "\n");
  write_text((base / "timings.json").string(), timings.dump(2) + "\n");
}

}  // namespace ppcauction
