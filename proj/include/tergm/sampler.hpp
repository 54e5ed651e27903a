#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "tergm/network.hpp"
#include "tergm/statistics.hpp"
#include "tergm/transition_model.hpp"

namespace tergm {

/// Gibbs controls are in sweeps; one sweep visits all n(n-1) dyads in
/// row-major order.
struct SamplerConfig {
  std::uint64_t seed = 0;
  std::size_t burn_in = 10;
  std::size_t thinning = 1;
  std::size_t samples = 1;  // B

  void validate() const;
};

/// B independent draws by per-dyad coin flips. Sample b uses the RNG stream
/// derived from (seed, b).
std::vector<Network> sample_transition_exact(const TransitionModel& model, const Network& previous,
                                             const SamplerConfig& config);

/// Same as above from precomputed change scores; `psi_out`, when given,
/// receives Psi(sample, previous) for each draw.
std::vector<Network> sample_transition_exact(const ChangeScoreTable& table, std::span<const double> theta,
                                             const SamplerConfig& config,
                                             std::vector<std::vector<double>>* psi_out = nullptr);

/// Statistics of B exact draws without materialising the networks.
std::vector<std::vector<double>> sample_statistics_exact(const ChangeScoreTable& table, std::span<const double> theta,
                                                         std::uint64_t seed, std::size_t samples);

/// Systematic-scan Gibbs sampler over the dyads of A^t, started at A^{t-1}.
/// Factorized statistics use their change scores; others are re-evaluated.
std::vector<Network> sample_transition_gibbs(const TransitionModel& model, const Network& previous,
                                             const SamplerConfig& config);

/// A^1 = initial, then A^t ~ P(. | A^{t-1}) for t = 2..T. Factorized models
/// use exact draws; others use Gibbs with the config's burn-in. Transition t
/// uses the stream derived from (seed, t).
NetworkSeries simulate_chain(const TransitionModel& model, const Network& initial, std::size_t length,
                             const SamplerConfig& config);

struct BernoulliInit {
  double q = 0.5;
};
struct SelfErgmInit {
  std::size_t burn_in_sweeps = 1000;
};
using InitialMode = std::variant<BernoulliInit, SelfErgmInit>;

/// One network from the initial law: independent Bernoulli(q) entries, or a
/// Gibbs draw from the static ERGM exp(theta' Psi(N, N)) / Z started empty.
Network sample_initial(const StatisticSet& stats, std::span<const double> theta, std::size_t n,
                       const SamplerConfig& config, const InitialMode& mode,
                       const NodeAttributeTable* attrs = nullptr);

}  // namespace tergm
