#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tergm/network.hpp"
#include "tergm/statistics.hpp"
#include "tergm/transition_model.hpp"

namespace tergm {

struct FitConfig {
  std::size_t max_iterations = 200;
  double convergence_epsilon = 0.1;  // Euclidean distance between successive iterates
  std::size_t B_initial = 100;
  std::size_t B_boost = 1000;
  double B_boost_trigger = 1.0;
  double step_damping = 1.0;  // initial step fraction, in (0, 1]
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> initial_theta;

  // Exact path: halve the step while the log-likelihood decreases, and stop
  // once ||grad|| < gradient_tolerance * (1 + |L|).
  bool line_search = true;
  double gradient_tolerance = 1e-6;

  // Sampled path.
  std::size_t gibbs_burn_in = 10;   // sweeps, general models only
  std::size_t gibbs_thinning = 1;
  bool exact_moments = false;       // substitute exact M and C (factorized models)
  std::size_t max_step_halvings = 30;
  // Trust region: the Euclidean length of a sampled Newton step is capped at
  // this value (0 disables). Undamped steps oscillate when started far out.
  double max_step_norm = 10.0;

  void validate() const;
};

struct IterationRecord {
  std::vector<double> theta;  // iterate after the update
  double step_size = 1.0;     // fraction of the Newton step taken
  double distance = 0.0;      // ||theta_new - theta_old||
  std::size_t samples = 0;    // B used (0 on the exact path)
  double log_likelihood = 0.0;  // exact path only
  bool regularized = false;
};

struct FitResult {
  std::vector<double> theta_hat;
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool regularized = false;
  std::vector<IterationRecord> trace;
  std::vector<std::string> diagnostics;
  std::string method;

  bool has_diagnostic(const std::string& prefix) const;
};

/// Damped Newton-Raphson with exact gradient and Hessian (factorized models).
/// `attrs` overrides the series labels when non-null.
FitResult fit_exact(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs,
                    const FitConfig& config);

/// Same, on already prepared transitions.
FitResult fit_exact(const PreparedSeries& prepared, const FitConfig& config);

/// Sampling-based Newton: per iteration and transition draw B networks from
/// the current model, form the sample mean and second moment of Psi, and
/// take theta <- theta - H^{-1} sum_t (Psi_obs - mu_t) with
/// H = sum_t (mu mu' - C). B switches from B_initial to B_boost once the
/// successive distance drops below B_boost_trigger.
FitResult fit_sampled(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs,
                      const FitConfig& config);
/// Only the listed transitions, by 0-based index of the later network.
FitResult fit_sampled(const StatisticSet& stats, const NetworkSeries& series, const NodeAttributeTable* attrs,
                      const FitConfig& config, const std::vector<std::size_t>& later_indices);

/// Statistics whose observed value sits at its extreme in every transition;
/// the MLE does not exist when this list is non-empty.
std::vector<std::string> separated_statistics(const PreparedSeries& prepared, const StatisticSet& stats);

struct UniformInit {
  double lo = 0.0, hi = 0.0;
};
/// theta_S, theta_R, theta_T ~ U[0,10) and theta_D = -5 (theta_S + theta_R + theta_T).
struct RecoveryInit {};
using InitScheme = std::variant<UniformInit, RecoveryInit>;

std::vector<double> random_init(const StatisticSet& stats, const InitScheme& scheme, std::uint64_t seed);

/// Solves H x = g for negative (semi)definite H; adds -lambda I when H is not
/// numerically negative definite. Sets `regularized` when that happened.
Eigen::VectorXd solve_negative_definite(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& rhs, bool& regularized);

}  // namespace tergm
