#include "tergm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tergm/error.hpp"
#include "tergm/parallel.hpp"
#include "tergm/random.hpp"
#include "tergm/sampler.hpp"

namespace tergm {

void GAConfig::validate() const {
  if (population < 2) throw UsageError("GA population must be at least 2");
  if (generations < 1 || sequences_per_candidate < 1 || tournament < 1) {
    throw UsageError("GA counts must be positive");
  }
  if (!(mutation_sigma_initial >= 0)) throw UsageError("mutation sigma must be non-negative");
  if (!(sigma_decay > 0 && sigma_decay < 1)) throw UsageError("sigma_decay must lie in (0, 1)");
}

namespace {

const NodeAttributeTable* spec_attrs(const HypothesisSpec& spec, const NetworkSeries& series) {
  if (spec.attrs) return &*spec.attrs;
  return series.attributes() ? &*series.attributes() : nullptr;
}

// Alternative-model starting point: shared statistics take the null values.
std::vector<double> embed(const StatisticSet& from, const std::vector<double>& theta, const StatisticSet& to) {
  std::vector<double> out(to.size(), 0.0);
  for (std::size_t m = 0; m < to.size(); ++m)
    if (auto i = from.index_of(to[m].name())) out[m] = theta[*i];
  return out;
}

struct PairFit {
  FitResult null_fit, alt_fit;
};

PairFit fit_pair(const HypothesisSpec& spec, const NetworkSeries& series, const NodeAttributeTable* attrs,
                 const FitConfig& base, const std::vector<double>& null_start) {
  FitConfig cfg = base;
  cfg.initial_theta = null_start;
  PairFit out;
  out.null_fit = fit_exact(spec.null_stats, series, attrs, cfg);
  cfg.initial_theta = embed(spec.null_stats, out.null_fit.theta_hat, spec.alt_stats);
  out.alt_fit = fit_exact(spec.alt_stats, series, attrs, cfg);
  return out;
}

enum class Outcome { failed, above, at_most };

Outcome simulate_and_compare(const HypothesisSpec& spec, const NetworkSeries& series, const NodeAttributeTable* attrs,
                             const std::vector<double>& theta0, double log_lr_observed, std::uint64_t seed,
                             const FitConfig& fit) {
  try {
    std::optional<NodeAttributeTable> model_attrs;
    if (attrs) model_attrs = *attrs;
    TransitionModel model(spec.null_stats, theta0, model_attrs);
    SamplerConfig sc;
    sc.seed = seed;
    const auto sim = simulate_chain(model, series[0], series.length(), sc);
    const auto fits = fit_pair(spec, sim, attrs, fit, theta0);
    if (!fits.null_fit.converged || !fits.alt_fit.converged) return Outcome::failed;
    const double log_lr = fits.null_fit.log_likelihood - fits.alt_fit.log_likelihood;
    if (!std::isfinite(log_lr)) return Outcome::failed;
    const double slack = 1e-9 * (1.0 + std::abs(log_lr_observed));
    return log_lr <= log_lr_observed + slack ? Outcome::at_most : Outcome::above;
  } catch (const Error&) {
    return Outcome::failed;
  }
}

void tally(GACandidate& c, const Outcome* outcomes, std::size_t count) {
  std::size_t hits = 0;
  c.valid = c.failed = 0;
  for (std::size_t r = 0; r < count; ++r) {
    if (outcomes[r] == Outcome::failed) ++c.failed;
    else {
      ++c.valid;
      if (outcomes[r] == Outcome::at_most) ++hits;
    }
  }
  c.frequency = c.valid ? static_cast<double>(hits) / static_cast<double>(c.valid) : 0.0;
}

}  // namespace

GACandidate evaluate_null_candidate(const HypothesisSpec& spec, const NetworkSeries& series,
                                    const std::vector<double>& theta0, double log_lr_observed,
                                    std::size_t sequences, std::uint64_t stream, const FitConfig& fit) {
  const auto* attrs = spec_attrs(spec, series);
  std::vector<Outcome> outcomes(sequences);
  parallel_for(sequences, [&](std::size_t r) {
    outcomes[r] = simulate_and_compare(spec, series, attrs, theta0, log_lr_observed, derive_seed(stream, {r}), fit);
  });
  GACandidate c;
  c.theta = theta0;
  tally(c, outcomes.data(), sequences);
  return c;
}

TestResult likelihood_ratio_test(const HypothesisSpec& spec, const NetworkSeries& series, const GAConfig& ga,
                                 const FitConfig& fit) {
  ga.validate();
  require_transitions(series);
  spec.null_stats.require_factorized("likelihood-ratio test (null)");
  spec.alt_stats.require_factorized("likelihood-ratio test (alternative)");
  const auto* attrs = spec_attrs(spec, series);

  TestResult result;
  auto observed = fit_pair(spec, series, attrs, fit, std::vector<double>(spec.null_stats.size(), 0.0));
  result.null_fit = std::move(observed.null_fit);
  result.alt_fit = std::move(observed.alt_fit);
  if (!result.null_fit.converged || !result.alt_fit.converged) {
    std::string why;
    for (const auto& d : result.null_fit.diagnostics) why += " null: " + d + ";";
    for (const auto& d : result.alt_fit.diagnostics) why += " alternative: " + d + ";";
    throw NumericalError("maximum-likelihood fit on the observed series failed:" + why);
  }
  result.log_lr = result.null_fit.log_likelihood - result.alt_fit.log_likelihood;
  result.lr_statistic = std::exp(result.log_lr);

  const std::size_t k = spec.null_stats.size();
  const std::size_t R = ga.sequences_per_candidate;
  std::vector<std::vector<double>> pending;
  {
    Rng rng = make_rng(ga.seed, {0x6a, 0});
    std::normal_distribution<double> noise(0.0, ga.mutation_sigma_initial);
    pending.push_back(result.null_fit.theta_hat);
    for (std::size_t i = 1; i < ga.population; ++i) {
      auto theta = result.null_fit.theta_hat;
      for (auto& v : theta) v += noise(rng);
      pending.push_back(std::move(theta));
    }
  }

  std::vector<GACandidate> population;
  bool have_best = false;
  for (std::size_t gen = 0; gen < ga.generations; ++gen) {
    // Evaluate the new candidates; every (candidate, sequence) pair owns a stream.
    std::vector<Outcome> outcomes(pending.size() * R);
    parallel_for(outcomes.size(), [&](std::size_t job) {
      const std::size_t c = job / R, r = job % R;
      const std::uint64_t seed = derive_seed(ga.seed, {0x5e9, gen, c, r});
      outcomes[job] = simulate_and_compare(spec, series, attrs, pending[c], result.log_lr, seed, fit);
    });
    for (std::size_t c = 0; c < pending.size(); ++c) {
      GACandidate cand;
      cand.theta = std::move(pending[c]);
      tally(cand, outcomes.data() + c * R, R);
      result.sequences_total += R;
      result.sequences_failed += cand.failed;
      ++result.candidates_evaluated;
      if (!have_best || cand.frequency > result.best.frequency) {
        result.best = cand;
        have_best = true;
      }
      population.push_back(std::move(cand));
    }
    result.ga_trace.push_back(result.best.frequency);
    if (gen + 1 == ga.generations) break;

    // Next generation: keep the best member, fill the rest by tournament
    // selection, uniform crossover and Gaussian mutation.
    Rng rng = make_rng(ga.seed, {0x6a, gen + 1});
    const double sigma = ga.mutation_sigma_initial * std::pow(ga.sigma_decay, static_cast<double>(gen + 1));
    std::normal_distribution<double> noise(0.0, sigma);
    std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
    auto tournament = [&]() -> const GACandidate& {
      std::size_t best = pick(rng);
      for (std::size_t i = 1; i < ga.tournament; ++i) {
        const std::size_t j = pick(rng);
        if (population[j].frequency > population[best].frequency) best = j;
      }
      return population[best];
    };
    const auto elite = std::max_element(population.begin(), population.end(), [](const auto& a, const auto& b) {
      return a.frequency < b.frequency;
    });
    std::vector<GACandidate> next{*elite};
    pending.clear();
    for (std::size_t i = 1; i < ga.population; ++i) {
      const auto& a = tournament();
      const auto& b = tournament();
      std::vector<double> child(k);
      for (std::size_t m = 0; m < k; ++m) child[m] = (uniform01(rng) < 0.5 ? a.theta[m] : b.theta[m]) + noise(rng);
      pending.push_back(std::move(child));
    }
    population = std::move(next);
  }

  result.p_value = result.best.frequency;
  const double failed_share =
      result.sequences_total ? static_cast<double>(result.sequences_failed) / static_cast<double>(result.sequences_total)
                             : 0.0;
  result.failure_rate_exceeded = failed_share > 0.05;
  if (result.sequences_failed > 0) {
    result.diagnostics.push_back("simulated fits failed: " + std::to_string(result.sequences_failed) + " of " +
                                 std::to_string(result.sequences_total) + " sequences excluded");
  }
  if (result.failure_rate_exceeded) result.diagnostics.push_back("fit failure rate above 5%");
  return result;
}

// ------------------------------------------------------------------ MCGEM

namespace {

double labelled_log_likelihood(const StatisticSet& stats, const NetworkSeries& series,
                               const NodeAttributeTable& labels, std::span<const double> theta) {
  std::vector<double> parts(series.length() - 1, 0.0);
  const std::size_t n = series.n();
  parallel_for(parts.size(), [&](std::size_t s) {
    const auto table = change_scores(stats, series[s], &labels);
    const auto eta = dyad_logits(table, theta);
    const auto& a = series[s + 1].data();
    double l = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) l += a[i * n + j] * eta[i * n + j] - softplus(eta[i * n + j]);
    parts[s] = l;
  });
  return std::accumulate(parts.begin(), parts.end(), 0.0);
}

// One systematic Gibbs sweep over the unknown labels; returns the number of
// labels that changed.
std::size_t label_sweep(const StatisticSet& stats, const NetworkSeries& series, NodeAttributeTable& labels,
                        const std::vector<std::size_t>& unknown, const std::vector<double>& log_prior,
                        std::span<const double> theta, Rng& rng) {
  const std::size_t L = labels.alphabet().size();
  std::size_t changes = 0;
  std::vector<double> lp(L);
  for (auto u : unknown) {
    const int before = labels.value(u);
    for (std::size_t c = 0; c < L; ++c) {
      if (!std::isfinite(log_prior[c])) {
        lp[c] = log_prior[c];
        continue;
      }
      labels.set_value(u, static_cast<int>(c));
      lp[c] = log_prior[c] + labelled_log_likelihood(stats, series, labels, theta);
    }
    const double hi = *std::max_element(lp.begin(), lp.end());
    double z = 0;
    for (auto& v : lp) z += (v = std::exp(v - hi));
    double x = uniform01(rng) * z;
    std::size_t chosen = L - 1;
    for (std::size_t c = 0; c < L; ++c) {
      if (x < lp[c]) {
        chosen = c;
        break;
      }
      x -= lp[c];
    }
    labels.set_value(u, static_cast<int>(chosen));
    if (static_cast<int>(chosen) != before) ++changes;
  }
  return changes;
}

double mean_objective(const StatisticSet& stats, const NetworkSeries& series, const std::vector<NodeAttributeTable>& samples,
                      std::span<const double> theta) {
  double q = 0;
  for (const auto& s : samples) q += labelled_log_likelihood(stats, series, s, theta);
  return q / static_cast<double>(samples.size());
}

}  // namespace

ClassificationResult mcgem_classify(const StatisticSet& stats, const NetworkSeries& series,
                                    const NodeAttributeTable& known, const std::vector<double>& prior,
                                    const MCGEMConfig& config, const NodeAttributeTable* truth) {
  config.fit.validate();
  require_transitions(series);
  stats.require_factorized("classification");
  if (!stats.requires_labels()) throw UsageError("classification needs at least one label-dependent statistic");
  if (known.size() != series.n()) throw DataError("label table size does not match the series");
  if (truth && (truth->size() != known.size() || truth->alphabet() != known.alphabet())) {
    throw DataError("truth labels must share the population and alphabet of the known labels");
  }
  if (config.samples < 1 || config.final_samples < 1) throw UsageError("sample counts must be positive");
  const std::size_t L = known.alphabet().size();
  std::vector<double> p = prior.empty() ? std::vector<double>(L, 1.0) : prior;
  if (p.size() != L) throw UsageError("prior length does not match the label alphabet");
  const double mass = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(mass > 0) || std::any_of(p.begin(), p.end(), [](double v) { return !(v >= 0); })) {
    throw UsageError("prior weights must be non-negative with positive total");
  }
  std::vector<double> log_prior(L);
  for (std::size_t c = 0; c < L; ++c) log_prior[c] = p[c] > 0 ? std::log(p[c] / mass) : -INFINITY;

  ClassificationResult result;
  for (std::size_t i = 0; i < known.size(); ++i)
    if (!known.is_observed(i)) result.unknown_nodes.push_back(i);

  if (result.unknown_nodes.empty()) {
    // No label uncertainty: the E-step is exact and one Newton step per
    // iteration is plain Newton-Raphson.
    auto fit = fit_exact(stats, series, &known, config.fit);
    result.theta_hat = fit.theta_hat;
    result.iterations = fit.iterations;
    result.converged = fit.converged;
    result.diagnostics = fit.diagnostics;
    for (const auto& rec : fit.trace) result.trace.push_back(rec.theta);
    result.exact_fit = std::move(fit);
    if (truth) result.accuracy = 1.0;
    return result;
  }

  const auto& unknown = result.unknown_nodes;
  const std::uint64_t seed = config.fit.seed;
  NodeAttributeTable labels = known;
  {
    Rng rng = make_rng(seed, {0x1abe1, 0});
    std::discrete_distribution<int> draw(p.begin(), p.end());
    for (auto u : unknown) labels.set_value(u, draw(rng));
  }

  std::vector<double> theta = config.fit.initial_theta.value_or(std::vector<double>(stats.size(), 0.0));
  if (theta.size() != stats.size()) throw UsageError("initial_theta length does not match the statistic set");
  std::optional<std::vector<double>> previous_theta;
  std::size_t stuck_iterations = 0;
  const auto k = static_cast<Eigen::Index>(stats.size());

  for (std::size_t it = 0; it < config.fit.max_iterations; ++it) {
    Rng rng = make_rng(seed, {0x1abe1, it + 1});
    std::size_t changes = 0;
    for (std::size_t s = 0; s < config.burn_in_sweeps; ++s)
      changes += label_sweep(stats, series, labels, unknown, log_prior, theta, rng);
    std::vector<NodeAttributeTable> samples;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(k);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
    std::vector<double> diffs;
    for (std::size_t s = 0; s < config.samples; ++s) {
      changes += label_sweep(stats, series, labels, unknown, log_prior, theta, rng);
      samples.push_back(labels);
      const PreparedSeries prepared(stats, series, &labels);
      const auto terms = prepared.evaluate(theta);
      g += terms.gradient;
      h += terms.hessian;
      if (previous_theta) diffs.push_back(terms.log_likelihood - prepared.evaluate(*previous_theta, false).log_likelihood);
    }
    if (changes == 0) ++stuck_iterations;
    if (diffs.size() > 1) {
      // The last M-step should not lower the fresh Monte Carlo objective by
      // more than two standard errors.
      const double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / static_cast<double>(diffs.size());
      double var = 0;
      for (double d : diffs) var += (d - mean) * (d - mean);
      const double se = std::sqrt(var / static_cast<double>(diffs.size() - 1) / static_cast<double>(diffs.size()));
      if (mean < -2.0 * se - 1e-12) {
        result.diagnostics.push_back("monotonicity: objective fell by " + std::to_string(-mean) + " (se " +
                                     std::to_string(se) + ") after iteration " + std::to_string(it));
      }
    }
    g /= static_cast<double>(config.samples);
    h /= static_cast<double>(config.samples);

    bool regularized = false;
    const Eigen::VectorXd direction = solve_negative_definite(h, g, regularized);
    if (regularized && std::find(result.diagnostics.begin(), result.diagnostics.end(), "regularized Hessian") ==
                           result.diagnostics.end()) {
      result.diagnostics.push_back("regularized Hessian");
    }
    const double q0 = mean_objective(stats, series, samples, theta);
    std::vector<double> next(theta.size());
    double eta = config.fit.step_damping;
    for (std::size_t halving = 0;; ++halving, eta *= 0.5) {
      for (std::size_t m = 0; m < theta.size(); ++m) next[m] = theta[m] - eta * direction[static_cast<Eigen::Index>(m)];
      const double q1 = mean_objective(stats, series, samples, next);
      if ((std::isfinite(q1) && q1 >= q0 - 1e-12 * (1.0 + std::abs(q0))) || halving >= config.fit.max_step_halvings) {
        if (!(q1 >= q0 - 1e-12 * (1.0 + std::abs(q0)))) next = theta;
        break;
      }
    }
    double distance = 0;
    for (std::size_t m = 0; m < theta.size(); ++m) distance += (next[m] - theta[m]) * (next[m] - theta[m]);
    distance = std::sqrt(distance);
    previous_theta = theta;
    theta = next;
    result.trace.push_back(theta);
    result.iterations = it + 1;
    if (distance < config.fit.convergence_epsilon) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged) {
    result.diagnostics.push_back("no convergence after " + std::to_string(result.iterations) + " iterations");
  }
  if (stuck_iterations > 0) {
    result.diagnostics.push_back("label chain stuck: no label changed in " + std::to_string(stuck_iterations) +
                                 " E-steps");
  }

  // Posterior modes under theta_hat.
  Rng rng = make_rng(seed, {0x1abe1, 0xf1a1});
  for (std::size_t s = 0; s < config.burn_in_sweeps; ++s)
    label_sweep(stats, series, labels, unknown, log_prior, theta, rng);
  std::vector<std::vector<std::size_t>> counts(unknown.size(), std::vector<std::size_t>(L, 0));
  for (std::size_t s = 0; s < config.final_samples; ++s) {
    label_sweep(stats, series, labels, unknown, log_prior, theta, rng);
    for (std::size_t u = 0; u < unknown.size(); ++u) ++counts[u][static_cast<std::size_t>(labels.value(unknown[u]))];
  }
  std::size_t correct = 0;
  for (std::size_t u = 0; u < unknown.size(); ++u) {
    const auto mode = static_cast<std::size_t>(std::max_element(counts[u].begin(), counts[u].end()) - counts[u].begin());
    result.predicted_labels.push_back(static_cast<int>(mode));
    result.posterior_mode_frequencies.push_back(static_cast<double>(counts[u][mode]) /
                                                static_cast<double>(config.final_samples));
    if (truth && truth->value(unknown[u]) == static_cast<int>(mode)) ++correct;
  }
  if (truth) result.accuracy = static_cast<double>(correct) / static_cast<double>(unknown.size());
  result.theta_hat = theta;
  return result;
}

double majority_baseline(const NodeAttributeTable& known, const NodeAttributeTable& truth) {
  if (truth.size() != known.size() || truth.alphabet() != known.alphabet()) {
    throw DataError("truth labels must share the population and alphabet of the known labels");
  }
  std::vector<std::size_t> counts(known.alphabet().size(), 0);
  std::size_t unknown = 0;
  for (std::size_t i = 0; i < known.size(); ++i) {
    if (known.is_observed(i)) ++counts[static_cast<std::size_t>(known.value(i))];
    else ++unknown;
  }
  if (unknown == 0) throw DataError("no unobserved nodes to predict");
  // max_element returns the first maximum, i.e. the earliest label on ties.
  const int majority = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < known.size(); ++i)
    if (!known.is_observed(i) && truth.value(i) == majority) ++correct;
  return static_cast<double>(correct) / static_cast<double>(unknown);
}

}  // namespace tergm
