#include "tergm/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "tergm/error.hpp"
#include "tergm/parallel.hpp"
#include "tergm/random.hpp"
#include "tergm/sampler.hpp"

namespace tergm {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

RecoveryReport recovery_experiment(const RecoveryConfig& config) {
  if (config.n < 3) throw UsageError("recovery needs n >= 3");
  if (config.T < 2) throw UsageError("recovery needs T >= 2");
  if (config.seeds < 1) throw UsageError("recovery needs at least one seed");
  const auto stats = StatisticSet::parse("D,S,R,T");

  RecoveryReport report;
  report.assumptions = {
      "statistics D,S,R,T",
      "n = " + std::to_string(config.n) + ", series length T = " + std::to_string(config.T) + " networks (" +
          std::to_string(config.T - 1) + " transitions); the series length is our choice",
      "true theta: S,R,T ~ U[0,10), D = -5(S+R+T)",
      "A^1 drawn from the static ERGM exp(theta' Psi(N,N)) by " + std::to_string(config.initial_burn_in) +
          " Gibbs sweeps from the empty network",
      "both fits start at theta = 0",
  };
  report.records.resize(config.seeds);
  for (std::size_t s = 0; s < config.seeds; ++s) {
    auto& rec = report.records[s];
    rec.index = s;
    try {
      rec.theta_true = random_init(stats, RecoveryInit{}, derive_seed(config.seed, {0x7ec0, s, 1}));
      SamplerConfig sc;
      sc.seed = derive_seed(config.seed, {0x7ec0, s, 2});
      const Network initial =
          sample_initial(stats, rec.theta_true, config.n, sc, SelfErgmInit{config.initial_burn_in});
      rec.initial_edges = edge_count(initial);
      TransitionModel model(stats, rec.theta_true);
      sc.seed = derive_seed(config.seed, {0x7ec0, s, 3});
      const auto series = simulate_chain(model, initial, config.T, sc);

      const auto exact = fit_exact(stats, series, nullptr, config.exact);
      FitConfig sampled_cfg = config.sampled;
      sampled_cfg.seed = derive_seed(config.seed, {0x7ec0, s, 4});
      const auto sampled = fit_sampled(stats, series, nullptr, sampled_cfg);
      rec.theta_exact = exact.theta_hat;
      rec.theta_sampled = sampled.theta_hat;
      rec.iterations_exact = exact.iterations;
      rec.iterations_sampled = sampled.iterations;
      rec.converged_exact = exact.converged;
      rec.converged_sampled = sampled.converged;
      for (const auto& d : exact.diagnostics) rec.diagnostics.push_back("exact: " + d);
      for (const auto& d : sampled.diagnostics) rec.diagnostics.push_back("sampled: " + d);
      rec.loss_exact = distance(rec.theta_exact, rec.theta_true);
      rec.loss_sampled = distance(rec.theta_sampled, rec.theta_true);
      rec.loss_sampled_vs_exact = distance(rec.theta_sampled, rec.theta_exact);
    } catch (const Error& e) {
      rec.diagnostics.push_back(std::string("failed: ") + e.what());
    }
  }
  report.all_converged = true;
  for (const auto& rec : report.records) {
    report.mean_loss_exact += rec.loss_exact;
    report.mean_loss_sampled += rec.loss_sampled;
    report.mean_loss_sampled_vs_exact += rec.loss_sampled_vs_exact;
    report.all_converged = report.all_converged && rec.converged_exact && rec.converged_sampled;
  }
  const auto count = static_cast<double>(report.records.size());
  report.mean_loss_exact /= count;
  report.mean_loss_sampled /= count;
  report.mean_loss_sampled_vs_exact /= count;
  return report;
}

double nearest_rank_percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw UsageError("percentile of an empty sample");
  if (!(pct > 0 && pct <= 100)) throw UsageError("percentile must lie in (0, 100]");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

double FitAssessment::coverage() const {
  if (cells.empty()) return 0.0;
  const auto inside = std::count_if(cells.begin(), cells.end(), [](const AssessmentCell& c) { return c.inside; });
  return static_cast<double>(inside) / static_cast<double>(cells.size());
}

FitAssessment crossval_assess(const StatisticSet& stats, const NetworkSeries& series, const CrossValConfig& config,
                              const NodeAttributeTable* attrs) {
  if (series.length() < 3) throw DataError("cross-validation needs at least 3 networks");
  if (config.samples < 1) throw UsageError("samples per transition must be positive");
  if (!attrs && series.attributes()) attrs = &*series.attributes();
  check_inputs(stats, series[0], attrs);
  const std::size_t T = series.length();
  const std::size_t k = stats.size();
  const bool factorized = stats.factorized();

  FitAssessment out;
  out.folds.resize(T - 1);
  std::vector<std::vector<AssessmentCell>> cells(T - 1);
  parallel_for(T - 1, [&](std::size_t f) {
    const std::size_t held = f + 1;  // later network of the held-out transition
    auto& fold = out.folds[f];
    fold.t = held + 1;
    std::vector<std::size_t> train;
    for (std::size_t t = 1; t < T; ++t)
      if (t != held) train.push_back(t);
    FitResult fit;
    try {
      FitConfig cfg = config.fit;
      cfg.seed = derive_seed(config.seed, {0xc7, f, 0});
      if (factorized) {
        fit = fit_exact(PreparedSeries(stats, series, attrs, train), cfg);
      } else {
        fit = fit_sampled(stats, series, attrs, cfg, train);
      }
    } catch (const Error& e) {
      fold.diagnostics.push_back(e.what());
      return;
    }
    fold.theta_hat = fit.theta_hat;
    fold.diagnostics = fit.diagnostics;
    if (!fit.converged) return;

    const Network& prev = series[held - 1];
    std::vector<std::vector<double>> psi;
    const std::uint64_t stream = derive_seed(config.seed, {0xc7, f, 1});
    if (factorized) {
      psi = sample_statistics_exact(change_scores(stats, prev, attrs), fit.theta_hat, stream, config.samples);
    } else {
      std::optional<NodeAttributeTable> model_attrs;
      if (attrs) model_attrs = *attrs;
      TransitionModel model(stats, fit.theta_hat, model_attrs);
      SamplerConfig sc{stream, config.gibbs_burn_in, 1, config.samples};
      for (const auto& net : sample_transition_gibbs(model, prev, sc)) psi.push_back(evaluate_all(stats, net, prev, attrs));
    }
    const auto observed = evaluate_all(stats, series[held], prev, attrs);
    for (std::size_t m = 0; m < k; ++m) {
      std::vector<double> column(psi.size());
      for (std::size_t b = 0; b < psi.size(); ++b) column[b] = psi[b][m];
      AssessmentCell cell;
      cell.t = held + 1;
      cell.statistic = stats[m].name();
      cell.observed = observed[m];
      cell.p5 = nearest_rank_percentile(column, 5);
      cell.p95 = nearest_rank_percentile(std::move(column), 95);
      // Tolerate round-off between the change-score and direct evaluations.
      const double tol = 1e-9 * (1.0 + std::abs(cell.observed));
      cell.inside = cell.observed >= cell.p5 - tol && cell.observed <= cell.p95 + tol;
      cells[f].push_back(std::move(cell));
    }
    fold.valid = true;
  });
  out.fits = T - 1;
  for (auto& c : cells)
    for (auto& cell : c) out.cells.push_back(std::move(cell));
  return out;
}

}  // namespace tergm
