#include "tergm/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tergm/error.hpp"
#include "tergm/parallel.hpp"
#include "tergm/random.hpp"
#include "tergm/sampler.hpp"

namespace tergm {

void FitConfig::validate() const {
  if (max_iterations < 1) throw UsageError("max_iterations must be positive");
  if (!(convergence_epsilon > 0)) throw UsageError("convergence_epsilon must be positive");
  if (B_initial < 1 || B_boost < B_initial) throw UsageError("require B_boost >= B_initial >= 1");
  if (!(step_damping > 0 && step_damping <= 1)) throw UsageError("step_damping must lie in (0, 1]");
  if (gibbs_thinning < 1) throw UsageError("gibbs_thinning must be at least 1");
  if (!(max_step_norm >= 0)) throw UsageError("max_step_norm must be non-negative");
}

bool FitResult::has_diagnostic(const std::string& prefix) const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const std::string& d) { return d.rfind(prefix, 0) == 0; });
}

Eigen::VectorXd solve_negative_definite(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& rhs, bool& regularized) {
  const Eigen::MatrixXd info = -hessian;
  const auto k = info.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  auto usable = [&](const Eigen::LLT<Eigen::MatrixXd>& f) {
    if (f.info() != Eigen::Success) return false;
    const auto& l = f.matrixLLT();
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      lo = std::min(lo, std::abs(l(i, i)));
      hi = std::max(hi, std::abs(l(i, i)));
    }
    // Squared diagonal ratio approximates the condition number.
    return lo > 0 && (lo / hi) * (lo / hi) > 1e-13;
  };
  if (usable(llt)) return -llt.solve(rhs);
  regularized = true;
  const double scale = std::max(1.0, info.diagonal().cwiseAbs().maxCoeff());
  for (double lambda = 1e-10 * scale;; lambda *= 10) {
    Eigen::LLT<Eigen::MatrixXd> reg(info + lambda * Eigen::MatrixXd::Identity(k, k));
    if (usable(reg) || lambda > 1e12 * scale) return -reg.solve(rhs);
  }
}

std::vector<std::string> separated_statistics(const PreparedSeries& prepared, const StatisticSet& stats) {
  std::vector<std::string> out;
  for (std::size_t m = 0; m < prepared.k(); ++m) {
    bool at_max = true, at_min = true, informative = false;
    for (std::size_t s = 0; s < prepared.transitions() && (at_max || at_min); ++s) {
      const auto& table = prepared.table(s);
      const auto& a = prepared.observed(s);
      const std::size_t n = prepared.n();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          const double d = table.delta(m, i, j);
          if (d == 0) continue;
          informative = true;
          const bool edge = a(i, j);
          if ((d > 0) != edge) at_max = false;
          if ((d > 0) == edge) at_min = false;
        }
    }
    if (informative && (at_max || at_min)) out.push_back(stats[m].name() + (at_max ? " at maximum" : " at minimum"));
  }
  return out;
}

namespace {

double norm(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<double> initial_theta(const FitConfig& config, std::size_t k) {
  if (!config.initial_theta) return std::vector<double>(k, 0.0);
  if (config.initial_theta->size() != k) throw UsageError("initial_theta length does not match the statistic set");
  return *config.initial_theta;
}

FitResult fit_exact_impl(const PreparedSeries& prepared, const StatisticSet* stats, const FitConfig& config) {
  config.validate();
  FitResult result;
  result.method = "exact";
  std::vector<double> theta = initial_theta(config, prepared.k());

  if (stats) {
    const auto separated = separated_statistics(prepared, *stats);
    if (!separated.empty()) {
      for (const auto& s : separated) result.diagnostics.push_back("mle_nonexistent: " + s);
      const auto terms = prepared.evaluate(theta);
      result.theta_hat = theta;
      result.log_likelihood = terms.log_likelihood;
      result.gradient_norm = terms.gradient.norm();
      return result;
    }
  }

  LikelihoodTerms terms = prepared.evaluate(theta);
  double last_distance = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0;; ++iter) {
    const double tol = config.gradient_tolerance * (1.0 + std::abs(terms.log_likelihood));
    if (!std::isfinite(terms.log_likelihood)) {
      result.diagnostics.push_back("non-finite log-likelihood");
      break;
    }
    if (terms.gradient.norm() < tol && last_distance < config.convergence_epsilon) {
      result.converged = true;
      break;
    }
    if (iter == config.max_iterations) {
      result.diagnostics.push_back("divergence: no convergence after " + std::to_string(iter) + " iterations");
      break;
    }
    bool regularized = false;
    const Eigen::VectorXd direction = solve_negative_definite(terms.hessian, terms.gradient, regularized);
    result.regularized |= regularized;

    double eta = config.step_damping;
    std::vector<double> next(theta.size());
    LikelihoodTerms next_terms;
    bool accepted = false;
    for (std::size_t h = 0; h <= config.max_step_halvings; ++h, eta *= 0.5) {
      for (std::size_t m = 0; m < theta.size(); ++m) next[m] = theta[m] - eta * direction[static_cast<Eigen::Index>(m)];
      next_terms = prepared.evaluate(next);
      const double slack = 1e-12 * (1.0 + std::abs(terms.log_likelihood));
      if (!config.line_search ||
          (std::isfinite(next_terms.log_likelihood) && next_terms.log_likelihood >= terms.log_likelihood - slack)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No ascent along the Newton direction: theta is stationary to working precision.
      last_distance = 0.0;
      if (terms.gradient.norm() < tol) result.converged = true;
      else result.diagnostics.push_back("stalled: line search found no ascent");
      break;
    }
    last_distance = norm(next, theta);
    theta = next;
    terms = std::move(next_terms);
    result.trace.push_back({theta, eta, last_distance, 0, terms.log_likelihood, regularized});
    result.iterations = iter + 1;
  }
  result.theta_hat = theta;
  result.log_likelihood = terms.log_likelihood;
  result.gradient_norm = terms.gradient.norm();
  if (result.regularized) result.diagnostics.push_back("regularized: Hessian was singular or ill-conditioned");
  return result;
}

}  // namespace

FitResult fit_exact(const PreparedSeries& prepared, const FitConfig& config) {
  return fit_exact_impl(prepared, nullptr, config);
}

FitResult fit_exact(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs,
                    const FitConfig& config) {
  require_transitions(series);
  stats.require_factorized("fit_exact");
  if (!attrs && series.attributes()) attrs = &*series.attributes();
  PreparedSeries prepared(stats, series, attrs);
  return fit_exact_impl(prepared, &stats, config);
}

FitResult fit_sampled(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs,
                      const FitConfig& config) {
  require_transitions(series);
  std::vector<std::size_t> all;
  for (std::size_t t = 1; t < series.length(); ++t) all.push_back(t);
  return fit_sampled(stats, series, attrs, config, all);
}

FitResult fit_sampled(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs,
                      const FitConfig& config, const std::vector<std::size_t>& later_indices) {
  config.validate();
  if (later_indices.empty()) throw DataError("no transitions selected");
  for (auto t : later_indices)
    if (t == 0 || t >= series.length()) throw DataError("transition index out of range");
  if (!attrs && series.attributes()) attrs = &*series.attributes();
  const std::size_t k = stats.size();
  const std::size_t transitions = later_indices.size();
  const bool factorized = stats.factorized();
  if (config.exact_moments && !factorized) throw UnsupportedModelError("exact moments need a factorized model");

  std::optional<PreparedSeries> prepared;
  Eigen::VectorXd observed = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  if (factorized) {
    prepared.emplace(stats, series, attrs, later_indices);
    observed = prepared->observed_statistics_sum();
  } else {
    check_inputs(stats, series[0], attrs);
    for (auto t : later_indices) {
      const auto psi = evaluate_all(stats, series[t], series[t - 1], attrs);
      observed += Eigen::Map<const Eigen::VectorXd>(psi.data(), static_cast<Eigen::Index>(k));
    }
  }
  std::optional<NodeAttributeTable> model_attrs;
  if (attrs) model_attrs = *attrs;

  FitResult result;
  result.method = "sampled";
  std::vector<double> theta = initial_theta(config, k);
  std::size_t B = config.B_initial;
  Eigen::VectorXd gradient = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));

  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    // Per-transition mean and (biased) covariance of Psi under theta. The
    // Hessian contribution mu mu' - C equals minus this covariance.
    std::vector<Eigen::VectorXd> mean(transitions);
    std::vector<Eigen::MatrixXd> cov(transitions);
    parallel_for(transitions, [&](std::size_t s) {
      if (config.exact_moments) {
        const auto mom = transition_moments(prepared->table(s), theta);
        mean[s] = mom.mean;
        cov[s] = mom.covariance;
        return;
      }
      const std::uint64_t stream = derive_seed(config.seed, {iter, s});
      std::vector<std::vector<double>> psi;
      if (factorized) {
        psi = sample_statistics_exact(prepared->table(s), theta, stream, B);
      } else {
        TransitionModel model(stats, theta, model_attrs);
        SamplerConfig sc{stream, config.gibbs_burn_in, config.gibbs_thinning, B};
        const Network& prev = series[later_indices[s] - 1];
        for (const auto& net : sample_transition_gibbs(model, prev, sc))
          psi.push_back(evaluate_all(stats, net, prev, attrs));
      }
      const auto kk = static_cast<Eigen::Index>(k);
      Eigen::VectorXd mu = Eigen::VectorXd::Zero(kk);
      for (const auto& v : psi) mu += Eigen::Map<const Eigen::VectorXd>(v.data(), kk);
      mu /= static_cast<double>(psi.size());
      Eigen::MatrixXd c = Eigen::MatrixXd::Zero(kk, kk);
      for (const auto& v : psi) {
        const Eigen::VectorXd centered = Eigen::Map<const Eigen::VectorXd>(v.data(), kk) - mu;
        c.noalias() += centered * centered.transpose();
      }
      mean[s] = mu;
      cov[s] = c / static_cast<double>(psi.size());
    });

    Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    gradient = observed;
    for (std::size_t s = 0; s < transitions; ++s) {
      hessian -= cov[s];
      gradient -= mean[s];
    }
    bool regularized = false;
    const Eigen::VectorXd direction = solve_negative_definite(hessian, gradient, regularized);
    result.regularized |= regularized;

    double eta = config.step_damping;
    const double length = eta * direction.norm();
    if (config.max_step_norm > 0 && length > config.max_step_norm) eta *= config.max_step_norm / length;
    std::vector<double> next(k);
    bool finite = false;
    for (std::size_t h = 0; h <= config.max_step_halvings && !finite; ++h) {
      finite = true;
      for (std::size_t m = 0; m < k; ++m) {
        next[m] = theta[m] - eta * direction[static_cast<Eigen::Index>(m)];
        finite = finite && std::isfinite(next[m]);
      }
      if (!finite) eta *= 0.5;
    }
    if (!finite) {
      result.diagnostics.push_back("non-finite Newton update");
      break;
    }
    const double distance = norm(next, theta);
    theta = next;
    result.iterations = iter + 1;
    result.trace.push_back({theta, eta, distance, config.exact_moments ? 0 : B,
                            std::numeric_limits<double>::quiet_NaN(), regularized});
    if (distance < config.convergence_epsilon) {
      result.converged = true;
      break;
    }
    if (distance < config.B_boost_trigger) B = config.B_boost;
  }
  if (!result.converged && result.diagnostics.empty()) {
    result.diagnostics.push_back("divergence: no convergence after " + std::to_string(result.iterations) + " iterations");
  }
  if (result.regularized) result.diagnostics.push_back("regularized: Hessian estimate was singular or ill-conditioned");
  result.theta_hat = theta;
  result.gradient_norm = gradient.norm();
  result.log_likelihood = prepared ? prepared->evaluate(theta, false).log_likelihood
                                   : std::numeric_limits<double>::quiet_NaN();
  return result;
}

std::vector<double> random_init(const StatisticSet& stats, const InitScheme& scheme, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x1a17});
  std::vector<double> theta(stats.size(), 0.0);
  if (const auto* u = std::get_if<UniformInit>(&scheme)) {
    if (u->hi < u->lo) throw UsageError("uniform init requires lo <= hi");
    for (auto& v : theta) v = u->lo + (u->hi - u->lo) * uniform01(rng);
    return theta;
  }
  const auto d = stats.index_of("D"), s = stats.index_of("S"), r = stats.index_of("R"), t = stats.index_of("T");
  if (stats.size() != 4 || !d || !s || !r || !t) {
    throw UsageError("the recovery initialization needs exactly the statistics {D,S,R,T}");
  }
  theta[*s] = 10.0 * uniform01(rng);
  theta[*r] = 10.0 * uniform01(rng);
  theta[*t] = 10.0 * uniform01(rng);
  theta[*d] = -5.0 * (theta[*s] + theta[*r] + theta[*t]);
  return theta;
}

}  // namespace tergm
