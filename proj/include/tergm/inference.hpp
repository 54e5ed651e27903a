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

struct HypothesisSpec {
  StatisticSet null_stats;
  StatisticSet alt_stats;
  std::optional<NodeAttributeTable> attrs;  // falls back to the series labels
};

struct GAConfig {
  std::size_t population = 20;
  std::size_t generations = 30;
  double mutation_sigma_initial = 10.0;
  double sigma_decay = 0.9;  // sigma_g = sigma_initial * decay^g
  std::size_t tournament = 3;
  std::size_t sequences_per_candidate = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GACandidate {
  std::vector<double> theta;
  double frequency = 0.0;  // share of valid sequences with lr <= observed lr
  std::size_t valid = 0, failed = 0;
};

struct TestResult {
  double lr_statistic = 1.0;  // L_null / L_alt at the respective MLEs
  double log_lr = 0.0;
  double p_value = 1.0;
  FitResult null_fit, alt_fit;
  std::vector<double> ga_trace;  // best frequency so far, per generation
  GACandidate best;
  std::size_t candidates_evaluated = 0;
  std::size_t sequences_total = 0, sequences_failed = 0;
  bool failure_rate_exceeded = false;  // more than 5% of simulated fits failed
  std::vector<std::string> diagnostics;
};

/// Likelihood-ratio test with the sup-over-null p-value approximated by a
/// genetic algorithm. Simulated sequences start from the observed A^1.
/// `fit` configures every maximum-likelihood fit (observed and simulated).
TestResult likelihood_ratio_test(const HypothesisSpec& spec, const NetworkSeries& series, const GAConfig& ga,
                                 const FitConfig& fit = {});

/// Frequency of {simulated lr <= exp(log_lr_observed)} over `sequences`
/// series simulated from the null at theta0. Stream ids extend `stream`.
GACandidate evaluate_null_candidate(const HypothesisSpec& spec, const NetworkSeries& series,
                                    const std::vector<double>& theta0, double log_lr_observed,
                                    std::size_t sequences, std::uint64_t stream, const FitConfig& fit);

struct MCGEMConfig {
  FitConfig fit;  // max_iterations, convergence_epsilon, step_damping, seed, initial_theta
  std::size_t burn_in_sweeps = 20;
  std::size_t samples = 50;          // label vectors per E-step
  std::size_t final_samples = 200;   // posterior draws under theta_hat for the modes
  MCGEMConfig() { fit.max_iterations = 100; }
};

struct ClassificationResult {
  std::vector<std::size_t> unknown_nodes;
  std::vector<int> predicted_labels;  // aligned with unknown_nodes
  std::vector<double> posterior_mode_frequencies;
  std::vector<double> theta_hat;
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<double> accuracy;
  std::vector<std::string> diagnostics;
  std::vector<std::vector<double>> trace;  // theta after each M-step
  std::optional<FitResult> exact_fit;       // set when every label was observed
};

/// Monte Carlo generalized EM over unknown labels. `known` supplies the
/// alphabet, the observed mask and the observed values (values of unobserved
/// nodes are ignored). `prior` is a distribution over the alphabet; empty
/// means uniform. `truth`, when given, is used only to report accuracy.
ClassificationResult mcgem_classify(const StatisticSet& stats, const NetworkSeries& series,
                                    const NodeAttributeTable& known, const std::vector<double>& prior,
                                    const MCGEMConfig& config, const NodeAttributeTable* truth = nullptr);

/// Accuracy on the unobserved nodes of always predicting the majority
/// observed label (ties: first label of the alphabet).
double majority_baseline(const NodeAttributeTable& known, const NodeAttributeTable& truth);

}  // namespace tergm
