#include "tergm/transition_model.hpp"

#include <cmath>

#include "tergm/error.hpp"
#include "tergm/parallel.hpp"

namespace tergm {

TransitionModel::TransitionModel(StatisticSet stats, std::vector<double> theta, std::optional<NodeAttributeTable> attrs)
    : stats_(std::move(stats)), theta_(std::move(theta)), attrs_(std::move(attrs)) {
  if (theta_.size() != stats_.size()) {
    throw UsageError("theta has " + std::to_string(theta_.size()) + " entries for " + std::to_string(stats_.size()) +
                     " statistics");
  }
  for (double v : theta_)
    if (!std::isfinite(v)) throw UsageError("theta entries must be finite");
}

const NodeAttributeTable* TransitionModel::attrs_for(const NetworkSeries& series) const {
  if (attrs_) return &*attrs_;
  return series.attributes() ? &*series.attributes() : nullptr;
}

TransitionModel TransitionModel::with_theta(std::vector<double> theta) const {
  return TransitionModel(stats_, std::move(theta), attrs_);
}

EdgeProbabilityMatrix EdgeProbabilityMatrix::clamped(double eps) const {
  EdgeProbabilityMatrix out = *this;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j) out(i, j) = std::min(std::max(out(i, j), eps), 1.0 - eps);
  return out;
}

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

std::vector<double> dyad_logits(const ChangeScoreTable& table, std::span<const double> theta) {
  const std::size_t n = table.n(), k = table.k();
  if (theta.size() != k) throw UsageError("theta length does not match the statistic set");
  std::vector<double> eta(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto d = table.dyad(i, j);
      double s = 0;
      for (std::size_t m = 0; m < k; ++m) s += theta[m] * d[m];
      eta[i * n + j] = s;
    }
  return eta;
}

EdgeProbabilityMatrix edge_probabilities(const ChangeScoreTable& table, std::span<const double> theta) {
  const std::size_t n = table.n();
  const auto eta = dyad_logits(table, theta);
  EdgeProbabilityMatrix p(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) p(i, j) = logistic(eta[i * n + j]);
  return p;
}

EdgeProbabilityMatrix edge_probabilities(const TransitionModel& model, const Network& previous) {
  model.stats().require_factorized("edge_probabilities");
  return edge_probabilities(change_scores(model.stats(), previous, model.attrs()), model.theta());
}

TransitionMoments transition_moments(const ChangeScoreTable& table, std::span<const double> theta) {
  const std::size_t n = table.n(), k = table.k();
  const auto eta = dyad_logits(table, theta);
  TransitionMoments out;
  out.mean = Eigen::Map<const Eigen::VectorXd>(table.base().data(), static_cast<Eigen::Index>(k));
  out.covariance = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double e = eta[i * n + j];
      const double p = logistic(e);
      const double w = p * logistic(-e);
      const Eigen::Map<const Eigen::VectorXd> d(table.dyad(i, j).data(), static_cast<Eigen::Index>(k));
      out.mean.noalias() += p * d;
      out.covariance.noalias() += w * d * d.transpose();
    }
  return out;
}

// ------------------------------------------------------------ PreparedSeries

PreparedSeries::PreparedSeries(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs) {
  require_transitions(series);
  std::vector<std::size_t> all;
  for (std::size_t t = 1; t < series.length(); ++t) all.push_back(t);
  build(stats, series, attrs, all);
}

PreparedSeries::PreparedSeries(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs,
                               const std::vector<std::size_t>& later_indices) {
  build(stats, series, attrs, later_indices);
}

void PreparedSeries::build(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs,
                           const std::vector<std::size_t>& later_indices) {
  stats.require_factorized("exact likelihood");
  if (later_indices.empty()) throw DataError("no transitions selected");
  k_ = stats.size();
  n_ = series.n();
  later_ = later_indices;
  for (auto t : later_) {
    if (t == 0 || t >= series.length()) throw DataError("transition index out of range");
    observed_.push_back(series[t]);
    previous_.push_back(series[t - 1]);
  }
  if (!previous_.empty()) check_inputs(stats, previous_.front(), attrs);
  tables_.resize(later_.size());
  observed_stats_.resize(later_.size());
  parallel_for(later_.size(), [&](std::size_t s) {
    tables_[s] = change_scores(stats, previous_[s], attrs);
    observed_stats_[s] = tables_[s].reconstruct(observed_[s]);
  });
}

Eigen::VectorXd PreparedSeries::observed_statistics_sum() const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k_));
  for (const auto& v : observed_stats_) sum += Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(k_));
  return sum;
}

LikelihoodTerms PreparedSeries::evaluate(std::span<const double> theta, bool derivatives) const {
  if (theta.size() != k_) throw UsageError("theta length does not match the statistic set");
  const auto k = static_cast<Eigen::Index>(k_);
  std::vector<LikelihoodTerms> parts(tables_.size());
  parallel_for(tables_.size(), [&](std::size_t s) {
    const auto& table = tables_[s];
    const auto& a = observed_[s].data();
    LikelihoodTerms part;
    if (derivatives) {
      part.gradient = Eigen::VectorXd::Zero(k);
      part.hessian = Eigen::MatrixXd::Zero(k, k);
    }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j) continue;
        const auto d = table.dyad(i, j);
        double eta = 0;
        for (std::size_t m = 0; m < k_; ++m) eta += theta[m] * d[m];
        const double y = a[i * n_ + j];
        part.log_likelihood += y * eta - softplus(eta);
        if (!derivatives) continue;
        const double p = logistic(eta);
        const double w = p * logistic(-eta);
        const Eigen::Map<const Eigen::VectorXd> dv(d.data(), k);
        part.gradient.noalias() += (y - p) * dv;
        if (w > 0) part.hessian.noalias() -= w * dv * dv.transpose();
      }
    parts[s] = std::move(part);
  });
  LikelihoodTerms total;
  if (derivatives) {
    total.gradient = Eigen::VectorXd::Zero(k);
    total.hessian = Eigen::MatrixXd::Zero(k, k);
  }
  for (const auto& part : parts) {
    total.log_likelihood += part.log_likelihood;
    if (derivatives) {
      total.gradient += part.gradient;
      total.hessian += part.hessian;
    }
  }
  return total;
}

double log_likelihood(const TransitionModel& model, const NetworkSeries& series) {
  PreparedSeries prepared(model.stats(), series, model.attrs_for(series));
  return prepared.evaluate(model.theta(), false).log_likelihood;
}

std::vector<double> gradient(const TransitionModel& model, const NetworkSeries& series) {
  PreparedSeries prepared(model.stats(), series, model.attrs_for(series));
  const auto g = prepared.evaluate(model.theta()).gradient;
  return {g.data(), g.data() + g.size()};
}

Eigen::MatrixXd hessian(const TransitionModel& model, const NetworkSeries& series) {
  PreparedSeries prepared(model.stats(), series, model.attrs_for(series));
  return prepared.evaluate(model.theta()).hessian;
}

double unnormalized_log_density(const TransitionModel& model, const Network& current, const Network& previous) {
  const auto psi = evaluate_all(model.stats(), current, previous, model.attrs());
  double s = 0;
  for (std::size_t m = 0; m < psi.size(); ++m) s += model.theta()[m] * psi[m];
  return s;
}

}  // namespace tergm
