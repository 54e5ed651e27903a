#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "tergm/network.hpp"
#include "tergm/statistics.hpp"
#include "tergm/transition_model.hpp"

namespace tergm {

struct DegeneracyReport {
  // Effective per-edge bound: sum_k beta_k |theta_k| / sum_k |theta_k|. Equals
  // the common beta when every statistic shares one.
  double beta = 0.0;
  std::vector<double> beta_per_statistic;
  bool instance_beta = false;  // computed from a supplied A^{t-1}
  double p_bound = 0.5;
  double expected_edges_lo = 0.0, expected_edges_hi = 0.0;
  double entropy_lower_bound = 0.0;  // nats
};

/// p = 1 / (exp(2 sum_k beta_k |theta_k|) + 1), edge interval
/// [n(n-1)p, n(n-1)(1-p)] and entropy >= n(n-1) H(p). Per-statistic betas
/// come from Statistic::edge_bound (tight for `previous` when given) unless
/// `beta_override` is set, in which case it applies to every statistic.
DegeneracyReport theorem1_bounds(const StatisticSet& stats, std::span<const double> theta, std::size_t n,
                                 const Network* previous = nullptr, const NodeAttributeTable* attrs = nullptr,
                                 std::optional<double> beta_override = std::nullopt);

struct BernoulliLaw {
  double q = 0.5;
};
struct ExplicitLaw {
  std::vector<std::pair<Network, double>> support;  // weights need not be normalised
};
using InitialLaw = std::variant<BernoulliLaw, ExplicitLaw>;

struct EntropyResult {
  double entropy = 0.0;         // H(A^2), nats
  double expected_edges = 0.0;  // E[edges of A^2]
};

inline constexpr std::size_t kMaxBruteForceNodes = 4;
inline constexpr std::size_t kMaxEdgeCountNodes = 40;

/// Exact H(A^2) by enumerating every (A^1, A^2) pair. n <= 4.
EntropyResult entropy_bruteforce(const TransitionModel& model, const InitialLaw& law, std::size_t n);

/// H(A^2) for the {D, S} model with A^1 ~ Bernoulli(q), summed over the
/// edge-count classes of A^2. n <= 40.
double entropy_edgecount(double theta_D, double theta_S, std::size_t n, double q);

/// Binary entropy in nats.
double binary_entropy(double p);

}  // namespace tergm
