#include "tergm/sampler.hpp"

#include <cmath>

#include "tergm/error.hpp"
#include "tergm/parallel.hpp"
#include "tergm/random.hpp"

namespace tergm {

void SamplerConfig::validate() const {
  if (thinning < 1) throw UsageError("thinning must be at least 1");
  if (samples < 1) throw UsageError("sample count B must be at least 1");
}

namespace {

std::vector<double> dyad_probabilities(const ChangeScoreTable& table, std::span<const double> theta) {
  auto p = dyad_logits(table, theta);
  for (double& v : p) v = logistic(v);
  return p;
}

// One exact draw; accumulates Psi into `psi` when non-null.
void draw_exact(const ChangeScoreTable& table, const std::vector<double>& prob, Rng& rng, Network* out,
                std::vector<double>* psi) {
  const std::size_t n = table.n(), k = table.k();
  if (psi) *psi = table.base();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool edge = uniform01(rng) < prob[i * n + j];
      if (!edge) continue;
      if (out) out->set(i, j, true);
      if (psi) {
        const auto d = table.dyad(i, j);
        for (std::size_t m = 0; m < k; ++m) (*psi)[m] += d[m];
      }
    }
}

}  // namespace

std::vector<Network> sample_transition_exact(const ChangeScoreTable& table, std::span<const double> theta,
                                             const SamplerConfig& config, std::vector<std::vector<double>>* psi_out) {
  config.validate();
  const auto prob = dyad_probabilities(table, theta);
  std::vector<Network> out(config.samples, Network(table.n()));
  if (psi_out) psi_out->assign(config.samples, {});
  parallel_for(config.samples, [&](std::size_t b) {
    Rng rng = make_rng(config.seed, {b});
    draw_exact(table, prob, rng, &out[b], psi_out ? &(*psi_out)[b] : nullptr);
  });
  return out;
}

std::vector<Network> sample_transition_exact(const TransitionModel& model, const Network& previous,
                                             const SamplerConfig& config) {
  model.stats().require_factorized("exact sampling");
  return sample_transition_exact(change_scores(model.stats(), previous, model.attrs()), model.theta(), config);
}

std::vector<std::vector<double>> sample_statistics_exact(const ChangeScoreTable& table, std::span<const double> theta,
                                                         std::uint64_t seed, std::size_t samples) {
  const auto prob = dyad_probabilities(table, theta);
  std::vector<std::vector<double>> psi(samples);
  parallel_for(samples, [&](std::size_t b) {
    Rng rng = make_rng(seed, {b});
    draw_exact(table, prob, rng, nullptr, &psi[b]);
  });
  return psi;
}

std::vector<Network> sample_transition_gibbs(const TransitionModel& model, const Network& previous,
                                             const SamplerConfig& config) {
  config.validate();
  const auto& stats = model.stats();
  const auto* attrs = model.attrs();
  check_inputs(stats, previous, attrs);
  const std::size_t n = previous.size();

  // Factorized part of the log-odds is fixed for the whole chain.
  std::vector<StatisticPtr> fact, general;
  std::vector<double> theta_fact, theta_general;
  for (std::size_t m = 0; m < stats.size(); ++m) {
    if (stats[m].factorized()) {
      fact.push_back(stats.ptr(m));
      theta_fact.push_back(model.theta()[m]);
    } else {
      general.push_back(stats.ptr(m));
      theta_general.push_back(model.theta()[m]);
    }
  }
  std::vector<double> fixed_logit(n * n, 0.0);
  if (!fact.empty()) fixed_logit = dyad_logits(change_scores(StatisticSet(fact), previous, attrs), theta_fact);

  Rng rng = make_rng(config.seed, {0x61bb5});
  Network state = previous;
  std::vector<Network> out;
  out.reserve(config.samples);
  const std::size_t sweeps = config.burn_in + config.thinning * config.samples;
  for (std::size_t sweep = 1; sweep <= sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        double logit = fixed_logit[i * n + j];
        for (std::size_t g = 0; g < general.size(); ++g)
          logit += theta_general[g] * general[g]->toggle_change(state, previous, attrs, i, j);
        state.set(i, j, uniform01(rng) < logistic(logit));
      }
    if (sweep > config.burn_in && (sweep - config.burn_in) % config.thinning == 0) out.push_back(state);
  }
  return out;
}

NetworkSeries simulate_chain(const TransitionModel& model, const Network& initial, std::size_t length,
                             const SamplerConfig& config) {
  if (length < 1) throw UsageError("series length must be at least 1");
  std::vector<Network> nets{initial};
  nets.reserve(length);
  const bool exact = model.stats().factorized();
  for (std::size_t t = 1; t < length; ++t) {
    SamplerConfig step = config;
    step.seed = derive_seed(config.seed, {0xc4a1, t});
    step.samples = 1;
    auto draw = exact ? sample_transition_exact(model, nets.back(), step)
                      : sample_transition_gibbs(model, nets.back(), step);
    nets.push_back(std::move(draw.front()));
  }
  return NetworkSeries(std::move(nets), model.attributes());
}

Network sample_initial(const StatisticSet& stats, std::span<const double> theta, std::size_t n,
                       const SamplerConfig& config, const InitialMode& mode, const NodeAttributeTable* attrs) {
  if (const auto* b = std::get_if<BernoulliInit>(&mode)) {
    if (!(b->q >= 0.0 && b->q <= 1.0)) throw UsageError("Bernoulli rate must lie in [0, 1]");
    Rng rng = make_rng(config.seed, {0xbe41});
    Network a(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && uniform01(rng) < b->q) a.set(i, j, true);
    return a;
  }
  const auto& self = std::get<SelfErgmInit>(mode);
  if (theta.size() != stats.size()) throw UsageError("theta length does not match the statistic set");
  SelfStatisticsTracker tracker(stats, Network(n), attrs);
  Rng rng = make_rng(config.seed, {0x5e1f});
  for (std::size_t sweep = 0; sweep < self.burn_in_sweeps; ++sweep)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const auto change = tracker.toggle_change(i, j);
        double logit = 0;
        for (std::size_t m = 0; m < change.size(); ++m) logit += theta[m] * change[m];
        tracker.set(i, j, uniform01(rng) < logistic(logit));
      }
  return tracker.network();
}

}  // namespace tergm
