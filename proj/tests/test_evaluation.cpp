#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tergm/error.hpp"
#include "tergm/evaluation.hpp"
#include "tergm/report.hpp"
#include "tergm/sampler.hpp"

using namespace tergm;

TEST_SUITE("evaluation") {

TEST_CASE("nearest-rank percentiles") {
  CHECK(nearest_rank_percentile({4.0}, 5) == 4.0);
  CHECK(nearest_rank_percentile({4.0}, 95) == 4.0);
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(101 - i);
  CHECK(nearest_rank_percentile(v, 5) == 5);
  CHECK(nearest_rank_percentile(v, 95) == 95);
  CHECK(nearest_rank_percentile(v, 100) == 100);
  CHECK_THROWS_AS(nearest_rank_percentile({}, 5), UsageError);
  CHECK_THROWS_AS(nearest_rank_percentile({1.0}, 0), UsageError);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::vector<double> grow;
  for (int i = 0; i < 300; ++i) {
    grow.push_back(z(rng));
    CHECK(nearest_rank_percentile(grow, 5) <= nearest_rank_percentile(grow, 95));
  }
}

TEST_CASE("cross-validation runs one fit per transition") {
  const auto stats = StatisticSet::parse("D,S,R");
  SamplerConfig sc{2, 0, 1, 1};
  const auto a1 = sample_initial(stats, std::vector<double>{-3, 5, 1}, 12, sc, BernoulliInit{0.3});
  const auto series = simulate_chain(TransitionModel(stats, {-3, 5, 1}), a1, 6, sc);
  CrossValConfig cfg;
  cfg.samples = 1;
  cfg.seed = 5;
  const auto out = crossval_assess(stats, series, cfg);
  CHECK(out.fits == 5);
  REQUIRE(out.folds.size() == 5);
  for (std::size_t f = 0; f < 5; ++f) CHECK(out.folds[f].t == f + 2);
  for (const auto& cell : out.cells) CHECK(cell.p5 == cell.p95);

  cfg.samples = 200;
  const auto full = crossval_assess(stats, series, cfg);
  CHECK(full.cells.size() == 5 * 3);
  for (const auto& cell : full.cells) CHECK(cell.p5 <= cell.p95);
  const auto again = crossval_assess(stats, series, cfg);
  for (std::size_t c = 0; c < full.cells.size(); ++c) CHECK(full.cells[c].p5 == again.cells[c].p5);

  const auto csv = assessment_csv(full);
  CHECK(csv.rfind("t,statistic,observed,p5,p95,inside\n", 0) == 0);
  CHECK_THROWS_AS(crossval_assess(stats, NetworkSeries({a1, a1}), cfg), DataError);
}

TEST_CASE("each fold's training likelihood leaves out exactly its transition") {
  const auto stats = StatisticSet::parse("D,S");
  SamplerConfig sc{3, 0, 1, 1};
  const auto series = simulate_chain(TransitionModel(stats, {-2, 4}), Network(8), 5, sc);
  CrossValConfig cfg;
  cfg.samples = 10;
  const auto out = crossval_assess(stats, series, cfg);
  for (const auto& fold : out.folds) {
    REQUIRE(fold.valid);
    std::vector<std::size_t> train;
    for (std::size_t t = 1; t < series.length(); ++t)
      if (t + 1 != fold.t) train.push_back(t);
    const auto direct = fit_exact(PreparedSeries(stats, series, nullptr, train), FitConfig{});
    for (std::size_t m = 0; m < 2; ++m) CHECK(fold.theta_hat[m] == doctest::Approx(direct.theta_hat[m]));
  }
}

TEST_CASE("recovery report is reproducible for a fixed seed") {
  RecoveryConfig cfg;
  cfg.n = 20;
  cfg.T = 4;
  cfg.seeds = 1;
  cfg.seed = 17;
  cfg.initial_burn_in = 50;
  const auto a = recovery_experiment(cfg);
  const auto b = recovery_experiment(cfg);
  REQUIRE(a.records.size() == 1);
  CHECK(a.records[0].theta_true == b.records[0].theta_true);
  CHECK(a.records[0].theta_exact == b.records[0].theta_exact);
  CHECK(a.records[0].theta_sampled == b.records[0].theta_sampled);
  CHECK(to_json(a)["records"].size() == 1);
  CHECK(recovery_csv(a).find('\n') != std::string::npos);
  CHECK_FALSE(a.assumptions.empty());
}

TEST_CASE("estimation error shrinks as the series grows") {
  const auto stats = StatisticSet::parse("D,S,R,T");
  const std::vector<double> theta{-3, 3, 1, 1};
  double loss5 = 0, loss50 = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    SamplerConfig sc{100 + s, 0, 1, 1};
    const auto a1 = sample_initial(stats, theta, 30, sc, BernoulliInit{0.3});
    const auto series = simulate_chain(TransitionModel(stats, theta), a1, 50, sc);
    std::vector<Network> head(series.networks().begin(), series.networks().begin() + 5);
    for (auto [len, loss] : {std::pair{5, &loss5}, std::pair{50, &loss50}}) {
      const auto fit = len == 5 ? fit_exact(stats, NetworkSeries(head), nullptr, FitConfig{})
                                : fit_exact(stats, series, nullptr, FitConfig{});
      double d = 0;
      for (std::size_t m = 0; m < 4; ++m) d += (fit.theta_hat[m] - theta[m]) * (fit.theta_hat[m] - theta[m]);
      *loss += std::sqrt(d) / 5;
    }
  }
  CHECK(loss50 < loss5);
}

}
