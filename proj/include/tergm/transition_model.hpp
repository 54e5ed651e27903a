#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tergm/network.hpp"
#include "tergm/statistics.hpp"

namespace tergm {

/// P(A^t | A^{t-1}, theta) proportional to exp(theta' Psi(A^t, A^{t-1})).
class TransitionModel {
 public:
  TransitionModel(StatisticSet stats, std::vector<double> theta,
                  std::optional<NodeAttributeTable> attrs = std::nullopt);

  const StatisticSet& stats() const noexcept { return stats_; }
  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::optional<NodeAttributeTable>& attributes() const noexcept { return attrs_; }

  /// The model's own labels if present, otherwise the series' labels.
  const NodeAttributeTable* attrs_for(const NetworkSeries& series) const;
  const NodeAttributeTable* attrs() const { return attrs_ ? &*attrs_ : nullptr; }

  TransitionModel with_theta(std::vector<double> theta) const;

 private:
  StatisticSet stats_;
  std::vector<double> theta_;
  std::optional<NodeAttributeTable> attrs_;
};

class EdgeProbabilityMatrix {
 public:
  EdgeProbabilityMatrix() = default;
  explicit EdgeProbabilityMatrix(std::size_t n) : n_(n), p_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return p_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return p_[i * n_ + j]; }
  const std::vector<double>& data() const noexcept { return p_; }

  /// Copy with entries clamped to [eps, 1-eps] off the diagonal; for display.
  EdgeProbabilityMatrix clamped(double eps = 1e-12) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> p_;
};

/// Logistic function and log(1 + e^x), both overflow-safe.
double logistic(double x);
double softplus(double x);

/// eta_ij = theta . delta_ij for every dyad (diagonal zero).
std::vector<double> dyad_logits(const ChangeScoreTable& table, std::span<const double> theta);

EdgeProbabilityMatrix edge_probabilities(const ChangeScoreTable& table, std::span<const double> theta);
/// Throws UnsupportedModelError for non-factorized statistic sets.
EdgeProbabilityMatrix edge_probabilities(const TransitionModel& model, const Network& previous);

/// Exact first two moments of Psi(A^t, A^{t-1}) under a factorized model:
/// mean is M(t, theta) and second_moment is C(t, theta) = Cov + M M'.
struct TransitionMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd second_moment() const { return covariance + mean * mean.transpose(); }
};

TransitionMoments transition_moments(const ChangeScoreTable& table, std::span<const double> theta);

struct LikelihoodTerms {
  double log_likelihood = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Change-score tables for a chosen set of transitions of a series, computed
/// once and reused across parameter values.
class PreparedSeries {
 public:
  /// All transitions t = 2..T.
  PreparedSeries(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs);
  /// Only the listed transitions, each identified by the 0-based index of its
  /// later network (1..T-1).
  PreparedSeries(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs,
                 const std::vector<std::size_t>& later_indices);

  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t transitions() const noexcept { return tables_.size(); }
  const ChangeScoreTable& table(std::size_t s) const { return tables_[s]; }
  const Network& observed(std::size_t s) const { return observed_[s]; }
  const Network& previous(std::size_t s) const { return previous_[s]; }
  const std::vector<std::size_t>& later_indices() const noexcept { return later_; }
  /// Psi(A^t, A^{t-1}) for transition s.
  const std::vector<double>& observed_statistics(std::size_t s) const { return observed_stats_[s]; }
  Eigen::VectorXd observed_statistics_sum() const;

  LikelihoodTerms evaluate(std::span<const double> theta, bool derivatives = true) const;

 private:
  void build(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs,
             const std::vector<std::size_t>& later_indices);

  std::size_t k_ = 0, n_ = 0;
  std::vector<std::size_t> later_;
  std::vector<ChangeScoreTable> tables_;
  std::vector<Network> observed_, previous_;
  std::vector<std::vector<double>> observed_stats_;
};

double log_likelihood(const TransitionModel& model, const NetworkSeries& series);
std::vector<double> gradient(const TransitionModel& model, const NetworkSeries& series);
Eigen::MatrixXd hessian(const TransitionModel& model, const NetworkSeries& series);

/// theta' Psi(A^t, A^{t-1}); works for any statistic set.
double unnormalized_log_density(const TransitionModel& model, const Network& current, const Network& previous);

}  // namespace tergm
