#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tergm/estimator.hpp"
#include "tergm/network.hpp"
#include "tergm/statistics.hpp"

namespace tergm {

struct RecoveryConfig {
  std::size_t n = 100;
  std::size_t T = 11;  // networks per series, i.e. T - 1 transitions
  std::size_t seeds = 10;
  std::uint64_t seed = 0;
  std::size_t initial_burn_in = 1000;  // Gibbs sweeps for A^1
  FitConfig exact;
  FitConfig sampled;
};

struct RecoveryRecord {
  std::size_t index = 0;
  std::vector<double> theta_true, theta_exact, theta_sampled;
  double loss_exact = 0.0;             // ||theta_exact - theta_true||
  double loss_sampled = 0.0;           // ||theta_sampled - theta_true||
  double loss_sampled_vs_exact = 0.0;  // ||theta_sampled - theta_exact||
  std::size_t iterations_exact = 0, iterations_sampled = 0;
  bool converged_exact = false, converged_sampled = false;
  std::size_t initial_edges = 0;
  std::vector<std::string> diagnostics;
};

struct RecoveryReport {
  std::vector<std::string> assumptions;
  std::vector<RecoveryRecord> records;
  double mean_loss_exact = 0.0, mean_loss_sampled = 0.0, mean_loss_sampled_vs_exact = 0.0;
  bool all_converged = false;
};

/// {D,S,R,T} model: per seed draw theta with the recovery initialization,
/// draw A^1 from the static ERGM under theta, simulate the series, then fit
/// it exactly and by sampling (both started at zero).
RecoveryReport recovery_experiment(const RecoveryConfig& config);

struct CrossValConfig {
  FitConfig fit;
  std::size_t samples = 500;  // m draws per held-out transition
  std::uint64_t seed = 0;
  std::size_t gibbs_burn_in = 10;  // general models only
};

struct AssessmentCell {
  std::size_t t = 0;  // 1-based index of the later network, 2..T
  std::string statistic;
  double observed = 0.0;
  double p5 = 0.0, p95 = 0.0;
  bool inside = false;
};

struct FoldRecord {
  std::size_t t = 0;
  bool valid = false;
  std::vector<double> theta_hat;
  std::vector<std::string> diagnostics;
};

struct FitAssessment {
  std::vector<AssessmentCell> cells;
  std::vector<FoldRecord> folds;
  std::size_t fits = 0;
  double coverage() const;
};

/// Leave-one-transition-out: for each t = 2..T fit on every other
/// transition, draw m networks from P(. | A^{t-1}, theta_hat) and compare
/// Psi(A^t, A^{t-1}) with the 5th and 95th nearest-rank percentiles.
FitAssessment crossval_assess(const StatisticSet& stats, const NetworkSeries& series, const CrossValConfig& config,
                              const NodeAttributeTable* attrs = nullptr);

/// Nearest-rank percentile (0 < pct <= 100) of an unsorted sample.
double nearest_rank_percentile(std::vector<double> values, double pct);

}  // namespace tergm
