#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "tergm/error.hpp"
#include "tergm/statistics.hpp"

using namespace tergm;

namespace {

NodeAttributeTable random_labels(std::size_t n, std::mt19937_64& rng) {
  std::vector<int> v(n);
  for (auto& x : v) x = static_cast<int>(rng() % 2);
  return NodeAttributeTable({"D", "R"}, v);
}

StatisticSet all_builtins() {
  std::vector<StatisticPtr> s;
  for (auto k : all_builtin_kinds()) s.push_back(make_builtin(k));
  return StatisticSet(s);
}

}  // namespace

TEST_SUITE("statistics") {

TEST_CASE("registry has thirteen statistics and rejects unknown names") {
  CHECK(all_builtin_kinds().size() == 13);
  CHECK(StatisticSet::parse("D,S,R,T").names() == std::vector<std::string>{"D", "S", "R", "T"});
  CHECK_THROWS_AS(StatisticSet::parse("D,Q"), UsageError);
  CHECK(StatisticSet::parse("WR,BR").requires_labels());
  CHECK_FALSE(StatisticSet::parse("D,S").requires_labels());
}

TEST_CASE("hand-evaluated values") {
  const std::size_t n = 3;
  Network two_path(n);
  two_path.set(0, 1, true);
  two_path.set(1, 2, true);
  Network closing(n);
  closing.set(0, 2, true);
  CHECK(evaluate(*make_statistic("D"), two_path, Network(n)) == doctest::Approx(1.0));
  CHECK(evaluate(*make_statistic("T"), closing, two_path) == doctest::Approx(3.0));
  CHECK(evaluate(*make_statistic("R"), Network::complete(n), Network(n)) == 0.0);

  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 5; ++rep) {
    const auto a = oracle::random_network(5, 0.4, rng);
    CHECK(evaluate(*make_statistic("S"), a, a) == doctest::Approx(5.0));
  }
  const auto empty = evaluate_all(StatisticSet::parse("D,S,R,T"), Network(4), Network(4));
  CHECK(empty == std::vector<double>{0.0, 4.0, 0.0, 0.0});
}

TEST_CASE("change scores for D, S and R") {
  const std::size_t n = 4;
  Network prev(n);
  prev.set(0, 1, true);
  const auto d = change_scores(StatisticSet::parse("D"), prev);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) CHECK(d.delta(0, i, j) == doctest::Approx(1.0 / 3));
  CHECK(d.base()[0] == 0.0);

  const auto s = change_scores(StatisticSet::parse("S"), prev);
  CHECK(s.delta(0, 0, 1) == doctest::Approx(1.0 / 3));
  CHECK(s.delta(0, 1, 0) == doctest::Approx(-1.0 / 3));

  const auto r = change_scores(StatisticSet::parse("R"), Network(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) CHECK(r.delta(0, i, j) == 0.0);
  CHECK(r.base()[0] == 0.0);
}

TEST_CASE("change-score reconstruction equals direct evaluation") {
  // Linearity certificate over every built-in, n = 3..6.
  std::mt19937_64 rng(42);
  const auto stats = all_builtins();
  for (std::size_t n = 3; n <= 6; ++n) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto prev = oracle::random_network(n, 0.15 + 0.7 * (rep % 5) / 4.0, rng);
      const auto cur = oracle::random_network(n, 0.5, rng);
      const auto labels = random_labels(n, rng);
      const auto table = change_scores(stats, prev, &labels);
      const auto direct = evaluate_all(stats, cur, prev, &labels);
      const auto rebuilt = table.reconstruct(cur);
      for (std::size_t m = 0; m < stats.size(); ++m) {
        INFO(stats[m].name(), " n=", n);
        CHECK(std::abs(direct[m] - rebuilt[m]) <= 1e-12 * (1 + std::abs(direct[m])));
      }
    }
  }
}

TEST_CASE("evaluate_all agrees with per-statistic evaluate") {
  std::mt19937_64 rng(7);
  const auto stats = all_builtins();
  const auto prev = oracle::random_network(5, 0.4, rng);
  const auto cur = oracle::random_network(5, 0.4, rng);
  const auto labels = random_labels(5, rng);
  const auto all = evaluate_all(stats, cur, prev, &labels);
  for (std::size_t m = 0; m < stats.size(); ++m) CHECK(all[m] == evaluate(stats[m], cur, prev, &labels));
}

TEST_CASE("ratio statistics lie in [0, n] and S, D in [0, n]") {
  std::mt19937_64 rng(9);
  const auto stats = all_builtins();
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 3 + rep % 5;
    const auto prev = oracle::random_network(n, 0.5, rng);
    const auto cur = oracle::random_network(n, 0.5, rng);
    const auto labels = random_labels(n, rng);
    for (double v : evaluate_all(stats, cur, prev, &labels)) {
      CHECK(v >= -1e-12);
      CHECK(v <= static_cast<double>(n) + 1e-12);
    }
  }
}

TEST_CASE("party split identities") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 6;
    const auto prev = oracle::random_network(n, 0.5, rng);
    const auto cur = oracle::random_network(n, 0.5, rng);
    const auto labels = random_labels(n, rng);
    const auto v = evaluate_all(StatisticSet::parse("D,WD,BD"), cur, prev, &labels);
    CHECK(v[0] == doctest::Approx(v[1] + v[2]));
  }
  // With a single party, WR equals R and BR is zero.
  const auto prev = oracle::random_network(5, 0.5, rng);
  const auto cur = oracle::random_network(5, 0.5, rng);
  NodeAttributeTable one({"A"}, std::vector<int>(5, 0));
  const auto v = evaluate_all(StatisticSet::parse("R,WR,BR"), cur, prev, &one);
  CHECK(v[1] == doctest::Approx(v[0]));
  CHECK(v[2] == 0.0);
}

TEST_CASE("statistics are permutation invariant") {
  std::mt19937_64 rng(13);
  const auto stats = all_builtins();
  const std::size_t n = 6;
  const auto prev = oracle::random_network(n, 0.4, rng);
  const auto cur = oracle::random_network(n, 0.4, rng);
  const auto labels = random_labels(n, rng);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto permute = [&](const Network& a) {
    Network b(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) b.set(perm[i], perm[j], a(i, j));
    return b;
  };
  std::vector<int> pv(n);
  for (std::size_t i = 0; i < n; ++i) pv[perm[i]] = labels.value(i);
  NodeAttributeTable plabels(labels.alphabet(), pv);
  const auto a = evaluate_all(stats, cur, prev, &labels);
  const auto b = evaluate_all(stats, permute(cur), permute(prev), &plabels);
  for (std::size_t m = 0; m < stats.size(); ++m) CHECK(a[m] == doctest::Approx(b[m]));
}

TEST_CASE("label statistics without labels are a data error") {
  CHECK_THROWS_AS(check_inputs(StatisticSet::parse("WR"), Network(3), nullptr), DataError);
  NodeAttributeTable small({"A"}, {0, 0});
  CHECK_THROWS_AS(check_inputs(StatisticSet::parse("WR"), Network(3), &small), DataError);
}

TEST_CASE("self statistics tracker follows full evaluation") {
  std::mt19937_64 rng(17);
  const auto stats = all_builtins();
  const std::size_t n = 5;
  const auto labels = random_labels(n, rng);
  SelfStatisticsTracker tracker(stats, Network(n), &labels);
  for (int step = 0; step < 200; ++step) {
    const std::size_t i = rng() % n, j = (i + 1 + rng() % (n - 1)) % n;
    const auto change = tracker.toggle_change(i, j);
    Network on = tracker.network(), off = tracker.network();
    on.set(i, j, true);
    off.set(i, j, false);
    const auto von = evaluate_all(stats, on, on, &labels);
    const auto voff = evaluate_all(stats, off, off, &labels);
    for (std::size_t m = 0; m < stats.size(); ++m) CHECK(change[m] == doctest::Approx(von[m] - voff[m]));
    tracker.set(i, j, rng() % 2);
    const auto direct = evaluate_all(stats, tracker.network(), tracker.network(), &labels);
    const auto tracked = tracker.values();
    for (std::size_t m = 0; m < stats.size(); ++m) CHECK(tracked[m] == doctest::Approx(direct[m]));
  }
}

TEST_CASE("custom statistics") {
  // Custom factorized copy of D.
  CustomFactorizedStatistic custom("myD", [](const Network& prev, const NodeAttributeTable*, std::span<double> d) {
    const std::size_t n = prev.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) d[i * n + j] = 1.0 / double(n - 1);
    return 0.0;
  });
  std::mt19937_64 rng(3);
  const auto a = oracle::random_network(5, 0.5, rng);
  CHECK(custom.evaluate(a, Network(5), nullptr) == doctest::Approx(evaluate(*make_statistic("D"), a, Network(5))));
  CHECK_FALSE(custom.edge_bound(5, nullptr, nullptr));

  GeneralStatistic mutual("mutual", [](const Network& cur, const Network&, const NodeAttributeTable*) {
    double s = 0;
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = 0; j < cur.size(); ++j)
        if (i != j) s += cur(i, j) && cur(j, i);
    return s;
  });
  CHECK_FALSE(mutual.factorized());
  StatisticSet set({make_statistic("D"), std::make_shared<GeneralStatistic>(mutual)});
  CHECK_THROWS_AS(set.require_factorized("exact fit"), UnsupportedModelError);
}

}
