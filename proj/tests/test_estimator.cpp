#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "tergm/error.hpp"
#include "tergm/estimator.hpp"
#include "tergm/sampler.hpp"

using namespace tergm;

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

NetworkSeries simulated(const StatisticSet& stats, const std::vector<double>& theta, std::size_t n, std::size_t T,
                        std::uint64_t seed, double q = 0.3) {
  SamplerConfig sc{seed, 0, 1, 1};
  const auto a1 = sample_initial(stats, theta, n, sc, BernoulliInit{q});
  return simulate_chain(TransitionModel(stats, theta), a1, T, sc);
}

// An n=3 instance whose MLE exists, is unique and sits inside [-4.5, 4.5]^4.
// With a single transition every n=3 instance is either separated or
// rank-deficient under {D,S,R,T}, so this uses two transitions.
NetworkSeries well_posed_tiny_instance(const StatisticSet& stats, FitResult& fit) {
  std::mt19937_64 rng(2024);
  for (int attempt = 0; attempt < 20000; ++attempt) {
    NetworkSeries series({oracle::from_code(3, rng() % 64), oracle::from_code(3, rng() % 64),
                          oracle::from_code(3, rng() % 64)});
    fit = fit_exact(stats, series, nullptr, FitConfig{});
    if (!fit.converged || fit.regularized) continue;
    const auto& t = fit.theta_hat;
    if (std::all_of(t.begin(), t.end(), [](double x) { return std::abs(x) <= 4.5; })) return series;
  }
  FAIL("no well-posed instance found");
  return {};
}

}  // namespace

TEST_SUITE("estimator") {

TEST_CASE("config validation") {
  FitConfig c;
  c.convergence_epsilon = 0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = {};
  c.B_boost = 10;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = {};
  c.step_damping = 1.5;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = {};
  c.initial_theta = std::vector<double>{1.0};
  CHECK_THROWS_AS(fit_exact(StatisticSet::parse("D,S"), NetworkSeries({Network(3), Network(3)}), nullptr, c),
                  UsageError);
}

TEST_CASE("exact MLE equals the dense grid-search argmax at n=3") {
  const auto stats = StatisticSet::parse("D,S,R,T");
  FitResult fit;
  const auto series = well_posed_tiny_instance(stats, fit);
  REQUIRE(fit.converged);

  // Group dyads by (change scores, outcome); L = sum y*eta - softplus(eta).
  std::map<std::pair<std::vector<double>, int>, int> groups;
  for (std::size_t t = 1; t < series.length(); ++t) {
    const auto table = change_scores(stats, series[t - 1]);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j) {
          auto d = table.dyad(i, j);
          ++groups[{std::vector<double>(d.begin(), d.end()), series[t](i, j) ? 1 : 0}];
        }
  }
  auto L = [&](const double* t) {
    double l = 0;
    for (const auto& [key, count] : groups) {
      const auto& d = key.first;
      const double eta = t[0] * d[0] + t[1] * d[1] + t[2] * d[2] + t[3] * d[3];
      l += count * (key.second * eta - softplus(eta));
    }
    return l;
  };
  double best = -INFINITY;
  double arg[4] = {0, 0, 0, 0};
  double t[4];
  for (int a = -50; a <= 50; ++a)
    for (int b = -50; b <= 50; ++b)
      for (int c = -50; c <= 50; ++c)
        for (int d = -50; d <= 50; ++d) {
          t[0] = a * 0.1, t[1] = b * 0.1, t[2] = c * 0.1, t[3] = d * 0.1;
          const double l = L(t);
          if (l > best) {
            best = l;
            std::copy(t, t + 4, arg);
          }
        }
  // The grid objective omits the constant base terms, so compare at theta-hat on the same scale.
  CHECK(L(fit.theta_hat.data()) >= best - 1e-12);
  for (int m = 0; m < 4; ++m) {
    INFO("component ", m, " exact=", fit.theta_hat[m], " grid=", arg[m]);
    CHECK(std::abs(fit.theta_hat[m] - arg[m]) <= 0.1 + 1e-9);
  }
}

TEST_CASE("converged exact fit satisfies first-order conditions and ascends") {
  const auto stats = StatisticSet::parse("D,S,R,T");
  const auto series = simulated(stats, {-6, 8, 2, 1}, 20, 6, 3);
  const auto fit = fit_exact(stats, series, nullptr, FitConfig{});
  REQUIRE(fit.converged);
  CHECK(fit.gradient_norm < 1e-6 * (1 + std::abs(fit.log_likelihood)));
  CHECK(fit.trace.back().distance < 0.1);
  CHECK(fit.log_likelihood == doctest::Approx(log_likelihood(TransitionModel(stats, fit.theta_hat), series)));
  double prev = log_likelihood(TransitionModel(stats, {0, 0, 0, 0}), series);
  for (const auto& rec : fit.trace) {
    CHECK(rec.log_likelihood >= prev - 1e-9);
    prev = rec.log_likelihood;
  }
}

TEST_CASE("consistency at the null") {
  const auto stats = StatisticSet::parse("D,S,R");
  const auto series = simulated(stats, {0, 0, 0}, 30, 20, 5, 0.5);
  const auto fit = fit_exact(stats, series, nullptr, FitConfig{});
  REQUIRE(fit.converged);
  const Eigen::MatrixXd cov = (-hessian(TransitionModel(stats, fit.theta_hat), series)).inverse();
  for (std::size_t m = 0; m < 3; ++m) CHECK(std::abs(fit.theta_hat[m]) < 4 * std::sqrt(cov(m, m)));
}

TEST_CASE("separation is reported as a nonexistent MLE") {
  std::mt19937_64 rng(1);
  const auto a = oracle::random_network(5, 0.4, rng);
  const auto fit = fit_exact(StatisticSet::parse("D,S"), NetworkSeries({a, a, a}), nullptr, FitConfig{});
  CHECK_FALSE(fit.converged);
  CHECK(fit.has_diagnostic("mle_nonexistent"));
}

TEST_CASE("exact moments make the sampled iteration retrace the exact one") {
  const auto stats = StatisticSet::parse("D,S,R,T");
  const auto series = simulated(stats, {-10, 6, 3, 1}, 15, 5, 7);
  FitConfig c;
  c.line_search = false;
  c.max_step_norm = 0;
  c.convergence_epsilon = 1e-8;
  c.max_iterations = 6;
  c.exact_moments = true;
  const auto exact = fit_exact(stats, series, nullptr, c);
  const auto sampled = fit_sampled(stats, series, nullptr, c);
  const std::size_t common = std::min(exact.trace.size(), sampled.trace.size());
  REQUIRE(common >= 3);
  for (std::size_t i = 0; i < common; ++i)
    for (std::size_t m = 0; m < 4; ++m)
      CHECK(sampled.trace[i].theta[m] == doctest::Approx(exact.trace[i].theta[m]).epsilon(1e-9));
}

TEST_CASE("sampled steps respect the step-length cap") {
  const auto stats = StatisticSet::parse("D,S,R,T");
  const auto series = simulated(stats, {-40, 6, 3, 1}, 30, 4, 11);
  FitConfig c;
  c.max_step_norm = 3;
  c.seed = 5;
  const auto fit = fit_sampled(stats, series, nullptr, c);
  REQUIRE(fit.trace.size() > 1);
  for (const auto& rec : fit.trace) CHECK(rec.distance <= 3 + 1e-9);
  CHECK(fit.trace.front().step_size < 1.0);
  FitConfig bad;
  bad.max_step_norm = -1;
  CHECK_THROWS_AS(bad.validate(), UsageError);
}

TEST_CASE("sampled fit lands near the exact MLE and is reproducible") {
  const auto stats = StatisticSet::parse("D,S,R,T");
  const auto series = simulated(stats, {-8, 6, 2, 1}, 25, 6, 9);
  FitConfig c;
  c.seed = 77;
  const auto exact = fit_exact(stats, series, nullptr, c);
  const auto a = fit_sampled(stats, series, nullptr, c);
  const auto b = fit_sampled(stats, series, nullptr, c);
  REQUIRE(a.converged);
  CHECK(a.trace.back().distance < c.convergence_epsilon);
  CHECK(dist(a.theta_hat, exact.theta_hat) < 0.5);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].theta == b.trace[i].theta);
  // B escalates once successive iterates are within the trigger distance.
  bool boosted = false;
  for (std::size_t i = 1; i < a.trace.size(); ++i) {
    if (a.trace[i - 1].distance < c.B_boost_trigger) boosted = true;
    CHECK(a.trace[i].samples == (boosted ? c.B_boost : c.B_initial));
  }
}

TEST_CASE("sampled fit with a general statistic") {
  auto mutual = std::make_shared<GeneralStatistic>("M", [](const Network& cur, const Network&, const NodeAttributeTable*) {
    double s = 0;
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j) s += cur(i, j) && cur(j, i);
    return s / double(cur.size());
  });
  StatisticSet stats({make_statistic("D"), make_statistic("S"), mutual});
  const std::vector<double> truth{-2, 4, 2};
  SamplerConfig sc{21, 20, 1, 1};
  const auto series = simulate_chain(TransitionModel(stats, truth), Network(10), 8, sc);
  FitConfig c;
  c.seed = 3;
  c.B_initial = 50;
  c.B_boost = 300;
  const auto fit = fit_sampled(stats, series, nullptr, c);
  CHECK(fit.converged);
  CHECK(std::isnan(fit.log_likelihood));
  CHECK_THROWS_AS(fit_exact(stats, series, nullptr, c), UnsupportedModelError);
}

TEST_CASE("random initialisation") {
  const auto stats = StatisticSet::parse("D,S,R,T");
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto t = random_init(stats, RecoveryInit{}, s);
    for (std::size_t m = 1; m < 4; ++m) {
      CHECK(t[m] >= 0);
      CHECK(t[m] < 10);
    }
    CHECK(t[0] == doctest::Approx(-5 * (t[1] + t[2] + t[3])));
  }
  CHECK(random_init(stats, RecoveryInit{}, 4) == random_init(stats, RecoveryInit{}, 4));
  CHECK(random_init(stats, UniformInit{0, 0}, 4) == std::vector<double>(4, 0.0));
  CHECK_THROWS_AS(random_init(StatisticSet::parse("D,S"), RecoveryInit{}, 1), UsageError);
}

TEST_CASE("regularised solve on a singular Hessian") {
  Eigen::MatrixXd H(2, 2);
  H << -1, -1, -1, -1;
  Eigen::VectorXd g(2);
  g << 1, 1;
  bool reg = false;
  const auto x = solve_negative_definite(H, g, reg);
  CHECK(reg);
  CHECK(x.allFinite());
  Eigen::MatrixXd good(2, 2);
  good << -2, 0.5, 0.5, -1;
  reg = false;
  const auto y = solve_negative_definite(good, g, reg);
  CHECK_FALSE(reg);
  CHECK((good * y - g).norm() < 1e-12);
}

TEST_CASE("relabelling nodes leaves the estimate unchanged") {
  const auto stats = StatisticSet::parse("D,S,R,T,WD,WR");
  std::mt19937_64 rng(31);
  const std::size_t n = 12;
  std::vector<int> v(n);
  for (auto& x : v) x = static_cast<int>(rng() % 2);
  NodeAttributeTable labels({"A", "B"}, v);
  std::vector<Network> nets;
  for (int t = 0; t < 5; ++t) nets.push_back(oracle::random_network(n, 0.3, rng));
  NetworkSeries series(nets, labels);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Network> pnets;
  for (const auto& a : nets) {
    Network b(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) b.set(perm[i], perm[j], a(i, j));
    pnets.push_back(b);
  }
  std::vector<int> pv(n);
  for (std::size_t i = 0; i < n; ++i) pv[perm[i]] = v[i];
  NetworkSeries pseries(pnets, NodeAttributeTable({"A", "B"}, pv));
  const auto a = fit_exact(stats, series, nullptr, FitConfig{});
  const auto b = fit_exact(stats, pseries, nullptr, FitConfig{});
  REQUIRE(a.converged);
  for (std::size_t m = 0; m < stats.size(); ++m) CHECK(a.theta_hat[m] == doctest::Approx(b.theta_hat[m]).epsilon(1e-8));
}

}
