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
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "ppcauction/auction.hpp"
#include "ppcauction/bench.hpp"
#include "ppcauction/error.hpp"

using namespace ppcauction;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)), {});
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ppcauction_bench_" + name);
  std::filesystem::remove_all(p);
  return p;
}

Json small_config() {
  return Json::parse(R"({
    "name": "small",
    "environment": {"kind": "synthetic", "dim": 3, "horizon": 120, "fit_epochs": 20},
    "seeds": [1, 2],
    "record_stride": 10,
    "algorithms": [
      {"id": "optsq", "type": "sgld", "params": {"steps_per_round": 4}, "grid": {"eta": [0.125, 0.25]}},
      {"id": "eg", "type": "eps_greedy", "grid": {"epsilon_scale": [1, 2]}},
      {"id": "sq", "type": "sgld", "params": {"estimator": "sq_ablation", "steps_per_round": 4}},
      {"id": "fixed", "type": "fixed_ctr"},
      {"id": "random", "type": "random_ctr"}
    ]
  })");
}

RunResult fake_run(const std::string& alg, std::size_t grid, std::uint64_t seed, double final_regret) {
  RunResult r;
  r.algorithm = alg;
  r.grid_id = grid;
  r.seed = seed;
  r.trace = {{5, final_regret / 2}, {10, final_regret}};
  r.final_regret = final_regret;
  return r;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("fixed-CTR baseline ranks by bid") {
  const auto x = ContextMatrix::non_contextual(4);
  const auto est = baseline_fixed_ctr(x);
  CHECK(est == std::vector<double>(4, 0.5));
  const std::vector<double> bids{0.2, 0.9, 0.4, 0.6};
  CHECK(allocate(bids, est).winner == 1);
  CHECK_THROWS_AS(baseline_fixed_ctr(ContextMatrix::non_contextual(1)), DimensionError);
}

TEST_CASE("random-CTR baseline lets every ad win sometimes") {
  Rng rng(3), bids_rng(4);
  std::vector<int> wins(5, 0);
  for (int t = 0; t < 10000; ++t) {
    const auto est = baseline_random_ctr(5, rng);
    std::vector<double> b(5);
    for (double& v : b) v = bids_rng.uniform(0.1, 1.0);
    for (double e : est) REQUIRE((e >= 0.0 && e <= 1.0));
    ++wins[allocate(b, est).winner];
  }
  for (int w : wins) CHECK(w > 0);
  Rng a(9), b(9);
  CHECK(baseline_random_ctr(3, a) == baseline_random_ctr(3, b));
}

TEST_CASE("fixed-CTR on the synthetic trace always shows the overridden ad") {
  SyntheticConfig c;
  c.dim = 4;
  c.horizon = 200;
  c.fit_epochs = 10;
  const auto env = generate_synthetic(c, 2);
  for (const auto& r : env.rounds) {
    const auto o = allocate(r.bids, baseline_fixed_ctr(r.context));
    CHECK(r.bids[o.winner] == 1.0);
    CHECK(r.true_ctr[o.winner] == *std::min_element(r.true_ctr.begin(), r.true_ctr.end()));
  }
}

TEST_CASE("summaries use the sample standard deviation") {
  auto s = summarize({fake_run("a", 0, 1, 10.0)}, Selection::kJoint);
  CHECK(s.rows.back().std == 0.0);
  s = summarize({fake_run("a", 0, 1, 10.0), fake_run("a", 0, 2, 14.0)}, Selection::kJoint);
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[1].round == 10);
  CHECK(s.rows[1].mean == 12.0);
  CHECK(s.rows[1].std == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("best grid point selection") {
  const std::vector<RunResult> runs{fake_run("a", 0, 1, 10.0), fake_run("a", 0, 2, 30.0),
                                    fake_run("a", 1, 1, 18.0), fake_run("a", 1, 2, 19.0),
                                    fake_run("b", 0, 1, 50.0)};
  auto joint = summarize(runs, Selection::kJoint);
  CHECK(joint.best[0].second == std::vector<std::size_t>{1});
  CHECK(joint.rows[1].mean == 18.5);
  CHECK(joint.rows.back().algorithm == "b");

  auto per_seed = summarize(runs, Selection::kPerSeed);
  CHECK(per_seed.best[0].second == std::vector<std::size_t>{0, 1});
  CHECK(per_seed.rows[1].mean == 14.5);
}

TEST_CASE("grid expansion") {
  auto a = AlgorithmSpec::from_json(Json::parse(
      R"({"type": "sgld", "params": {"alpha": 0.01}, "grid": {"eta": [0.1, 0.2, 0.3], "alpha": [0.5, 1]}})"));
  const auto pts = a.grid_points();
  REQUIRE(pts.size() == 6);
  CHECK(pts[0] == Json::parse(R"({"alpha": 0.5, "eta": 0.1})"));
  CHECK(pts[1] == Json::parse(R"({"alpha": 0.5, "eta": 0.2})"));
  CHECK(pts[3] == Json::parse(R"({"alpha": 1, "eta": 0.1})"));
  CHECK(a.id == "sgld");
}

TEST_CASE("run counts: one per algorithm, grid point and seed") {
  auto j = small_config();
  j["algorithms"] = Json::parse(R"([{"type": "sgld", "params": {"steps_per_round": 2}, "grid": {"eta": [0.0625, 0.125, 0.25]}}])");
  j["seeds"] = {0, 1, 2, 3};
  const auto r = run_experiment(ExperimentConfig::from_json(j), 1);
  CHECK(r.runs.size() == 12);

  const auto five = run_experiment(ExperimentConfig::from_json(small_config()), 1);
  std::set<std::string> groups;
  for (const auto& run : five.runs) groups.insert(run.algorithm);
  CHECK(groups.size() == 5);
  CHECK(five.runs.size() == (2 + 2 + 1 + 1 + 1) * 2);
}

TEST_CASE("traces are recorded at the stride and end at T") {
  const auto r = run_experiment(ExperimentConfig::from_json(small_config()), 1);
  for (const auto& run : r.runs) {
    REQUIRE(run.trace.size() == 12);
    for (std::size_t k = 0; k < run.trace.size(); ++k) CHECK(run.trace[k].first == 10 * (k + 1));
    CHECK(run.trace.back().second == run.final_regret);
  }
  auto j = small_config();
  j["record_stride"] = 0;
  CHECK(ExperimentConfig::from_json(j).stride() == 1);
  j["environment"]["horizon"] = 2000;
  CHECK(ExperimentConfig::from_json(j).stride() == 10);
}

TEST_CASE("all algorithms at a seed face the same trace") {
  const auto r = run_experiment(ExperimentConfig::from_json(small_config()), 1);
  REQUIRE(r.traces.size() == 2);
  CHECK(r.traces[0].seed == 1);
  CHECK(r.traces[1].seed == 2);
  CHECK_FALSE(r.traces[0].rounds[0].bids == r.traces[1].rounds[0].bids);
}

TEST_CASE("round log reproduces the regret trace") {
  auto j = small_config();
  j["output"] = {{"round_log", true}};
  const auto r = run_experiment(ExperimentConfig::from_json(j), 1);
  for (const auto& run : r.runs) {
    REQUIRE(run.rounds.size() == 120);
    double cum = 0;
    std::size_t next = 0;
    for (const auto& l : run.rounds) {
      cum += l.oracle_revenue - l.payment;
      if (l.round == run.trace[next].first) {
        CHECK(cum == doctest::Approx(run.trace[next].second).epsilon(1e-12));
        ++next;
      }
      CHECK((l.payment == 0.0 || l.clicked));
    }
    CHECK(next == run.trace.size());
  }
}

TEST_CASE("identical configs give identical outputs regardless of workers") {
  const auto cfg = ExperimentConfig::from_json(small_config());
  const auto a = run_experiment(cfg, 1), b = run_experiment(cfg, 3);
  const auto da = temp_dir("a"), db = temp_dir("b");
  write_experiment(cfg, a, da.string());
  write_experiment(cfg, b, db.string());
  for (const char* f : {"results.csv", "summary.csv", "run.json"}) {
    CHECK(slurp(da / f) == slurp(db / f));
    CHECK_FALSE(slurp(da / f).empty());
  }
  CHECK(std::filesystem::exists(da / "timings.json"));
  std::filesystem::remove_all(da);
  std::filesystem::remove_all(db);
}

TEST_CASE("results CSV round-trips and re-summarizes identically") {
  const auto cfg = ExperimentConfig::from_json(small_config());
  const auto r = run_experiment(cfg, 1);
  const auto d = temp_dir("csv");
  write_experiment(cfg, r, d.string());
  const auto back = read_results_csv((d / "results.csv").string());
  REQUIRE(back.size() == r.runs.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].trace == r.runs[k].trace);
    CHECK(back[k].final_regret == r.runs[k].final_regret);
  }
  write_summary_csv(summarize(back, cfg.selection), (d / "again.csv").string());
  CHECK(slurp(d / "again.csv") == slurp(d / "summary.csv"));
  std::filesystem::remove_all(d);
}

TEST_CASE("replaying a saved trace reproduces the run") {
  auto j = small_config();
  j["seeds"] = {5};
  j["output"] = {{"write_traces", true}};
  const auto cfg = ExperimentConfig::from_json(j);
  const auto r = run_experiment(cfg, 1);
  const auto d = temp_dir("replay");
  write_experiment(cfg, r, d.string());
  const auto trace = load_trace((d / "trace_seed5.csv").string());
  const auto again = run_experiment(cfg, 1, &trace);
  REQUIRE(again.runs.size() == r.runs.size());
  for (std::size_t k = 0; k < r.runs.size(); ++k) CHECK(again.runs[k].trace == r.runs[k].trace);
  std::filesystem::remove_all(d);
}

TEST_CASE("overrides edit nested keys") {
  Json j = small_config();
  apply_override(j, "environment.horizon=40");
  CHECK(j["environment"]["horizon"] == 40);
  apply_override(j, "algorithms.0.grid.eta=[0.5]");
  CHECK(j["algorithms"][0]["grid"]["eta"] == Json::parse("[0.5]"));
  apply_override(j, "name=plain text");
  CHECK(j["name"] == "plain text");
  apply_override(j, "algorithms.1.params.mode=sigma_mixture");
  CHECK(j["algorithms"][1]["params"]["mode"] == "sigma_mixture");
  CHECK_THROWS_AS(apply_override(j, "novalue"), ConfigError);
  CHECK_THROWS_AS(apply_override(j, "algorithms.9.id=x"), ConfigError);
  CHECK_THROWS_AS(apply_override(j, "name.inner=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(j, "algorithms.x=1"), ConfigError);
}

TEST_CASE("invalid configurations are rejected before running") {
  auto bad = [](const char* path_value) {
    INFO(std::string(path_value));
    Json j = small_config();
    apply_override(j, path_value);
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
  };
  bad("algorithms.0.params.estimator=ips");
  bad(R"(algorithms=[{"type": "finite_exp_weights"}])");
  bad(R"(algorithms=[{"type": "eps_greedy", "params": {"mode": "sigma_mixture", "sigma": 0.5}}])");
  bad(R"(algorithms=[{"type": "nonsense"}])");
  bad(R"(algorithms=[])");
  bad("seeds=[]");
  bad("seeds=[1,1]");
  bad("environment.horizon=0");
  bad("environment.colour=3");
  bad("colour=3");
  bad("selection=best");
  bad("algorithms.0.grid.eta=[2.0]");
  bad("algorithms.0.grid.eta=[]");
  bad("algorithms.1.grid.epsilon_scale=[\"lots\"]");
  bad(R"(environment={"kind": "hard_instance", "num_ads": 2})");
  bad(R"(environment={"kind": "stationary", "num_ads": 1})");
  bad(R"(environment={"kind": "stationary", "num_ads": 3})");
  bad(R"(algorithms=[{"id": "x", "type": "random_ctr"}, {"id": "x", "type": "fixed_ctr"}])");

  Json cap = Json::parse(R"({"environment": {"kind": "stationary", "num_ads": 4, "horizon": 100},
    "seeds": [0], "algorithms": [{"type": "finite_exp_weights"}]})");
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(cap), doctest::Contains("104060401"), ConfigError);
  cap["algorithms"][0]["params"] = {{"grid_resolution", 10}};
  CHECK_NOTHROW(ExperimentConfig::from_json(cap));

  Json sigma = small_config();
  apply_override(sigma, R"(algorithms=[{"type": "eps_greedy", "params": {"mode": "sigma_mixture", "sigma": 0.1}}])");
  CHECK_NOTHROW(ExperimentConfig::from_json(sigma));
}

TEST_CASE("finite exponential weights runs on non-contextual environments") {
  Json j = Json::parse(R"({"environment": {"kind": "stationary", "num_ads": 2, "horizon": 100},
    "seeds": [0, 1], "algorithms": [
      {"id": "ips", "type": "finite_exp_weights", "params": {"eta": "theory", "grid_resolution": 10}},
      {"id": "optsq", "type": "finite_exp_weights", "params": {"estimator": "optsq", "eta": 0.25, "grid_resolution": 10}}]})");
  const auto r = run_experiment(ExperimentConfig::from_json(j), 2);
  CHECK(r.runs.size() == 4);
  for (const auto& run : r.runs) CHECK(std::isfinite(run.final_regret));
  j["algorithms"][0]["params"]["eta"] = "guess";
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
}

TEST_CASE("hard instance environment runs") {
  Json j = Json::parse(R"({"environment": {"kind": "hard_instance", "num_ads": 5, "horizon": 200},
    "seeds": [3], "algorithms": [{"type": "fixed_ctr"}]})");
  const auto r = run_experiment(ExperimentConfig::from_json(j), 1);
  REQUIRE(r.runs.size() == 1);
  CHECK(r.traces[0].elevated.has_value());
}

}  // TEST_SUITE
