#include "tergm/degeneracy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "tergm/error.hpp"
#include "tergm/parallel.hpp"

namespace tergm {

double binary_entropy(double p) {
  double h = 0;
  if (p > 0) h -= p * std::log(p);
  if (p < 1) h -= (1 - p) * std::log1p(-p);
  return h;
}

DegeneracyReport theorem1_bounds(const StatisticSet& stats, std::span<const double> theta, std::size_t n,
                                 const Network* previous, const NodeAttributeTable* attrs,
                                 std::optional<double> beta_override) {
  if (theta.size() != stats.size()) throw UsageError("theta length does not match the statistic set");
  if (n < 2) throw UsageError("n must be at least 2");
  if (previous && previous->size() != n) throw DataError("previous network size does not match n");
  if (beta_override && !(*beta_override >= 0)) throw UsageError("beta must be non-negative");
  stats.require_factorized("analytic degeneracy bounds");

  DegeneracyReport r;
  r.instance_beta = previous != nullptr && !beta_override;
  double weighted = 0, total = 0;
  for (std::size_t m = 0; m < stats.size(); ++m) {
    std::optional<double> b = beta_override;
    if (!b) b = stats[m].edge_bound(n, previous, attrs);
    if (!b) {
      throw UsageError("statistic " + stats[m].name() + " has no known per-edge bound; supply beta explicitly");
    }
    r.beta_per_statistic.push_back(*b);
    weighted += *b * std::abs(theta[m]);
    total += std::abs(theta[m]);
  }
  r.beta = total > 0 ? weighted / total
                     : (r.beta_per_statistic.empty()
                            ? 0.0
                            : *std::max_element(r.beta_per_statistic.begin(), r.beta_per_statistic.end()));
  // 1 / (e^x + 1) without overflow.
  r.p_bound = logistic(-2.0 * weighted);
  const double dyads = static_cast<double>(n * (n - 1));
  r.expected_edges_lo = dyads * r.p_bound;
  r.expected_edges_hi = dyads * (1.0 - r.p_bound);
  r.entropy_lower_bound = dyads * binary_entropy(r.p_bound);
  return r;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> dyad_list(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> d;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) d.emplace_back(i, j);
  return d;
}

Network network_of(std::size_t state, std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& dyads) {
  Network a(n);
  for (std::size_t d = 0; d < dyads.size(); ++d)
    if (state >> d & 1U) a.set(dyads[d].first, dyads[d].second, true);
  return a;
}

// P(A^2 = s | A^1) for every state s.
void conditional_distribution(const TransitionModel& model, const Network& prev,
                              const std::vector<std::pair<std::size_t, std::size_t>>& dyads,
                              std::vector<double>& out) {
  const std::size_t states = out.size();
  const std::size_t n = prev.size();
  if (model.stats().factorized()) {
    const auto table = change_scores(model.stats(), prev, model.attrs());
    const auto eta = dyad_logits(table, model.theta());
    out[0] = 1.0;
    for (std::size_t d = 0; d < dyads.size(); ++d) {
      const double p = logistic(eta[dyads[d].first * n + dyads[d].second]);
      const std::size_t half = std::size_t{1} << d;
      for (std::size_t s = 0; s < half; ++s) {
        out[s | half] = out[s] * p;
        out[s] *= 1.0 - p;
      }
    }
    return;
  }
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < states; ++s) {
    out[s] = unnormalized_log_density(model, network_of(s, n, dyads), prev);
    hi = std::max(hi, out[s]);
  }
  double z = 0;
  for (auto& v : out) z += (v = std::exp(v - hi));
  for (auto& v : out) v /= z;
}

}  // namespace

EntropyResult entropy_bruteforce(const TransitionModel& model, const InitialLaw& law, std::size_t n) {
  if (n < 2 || n > kMaxBruteForceNodes) {
    throw UsageError("brute-force entropy supports 2 <= n <= " + std::to_string(kMaxBruteForceNodes));
  }
  const auto dyads = dyad_list(n);
  const std::size_t states = std::size_t{1} << dyads.size();

  std::vector<std::pair<Network, double>> support;
  if (const auto* b = std::get_if<BernoulliLaw>(&law)) {
    if (!(b->q >= 0 && b->q <= 1)) throw UsageError("Bernoulli rate must lie in [0, 1]");
    for (std::size_t s = 0; s < states; ++s) {
      const auto e = static_cast<double>(std::popcount(s));
      const double w = std::pow(b->q, e) * std::pow(1 - b->q, static_cast<double>(dyads.size()) - e);
      if (w > 0) support.emplace_back(network_of(s, n, dyads), w);
    }
  } else {
    double total = 0;
    for (const auto& [net, w] : std::get<ExplicitLaw>(law).support) {
      if (net.size() != n) throw DataError("initial-law network size does not match n");
      if (!(w >= 0)) throw DataError("initial-law weights must be non-negative");
      total += w;
    }
    if (!(total > 0)) throw DataError("initial law has no mass");
    for (const auto& [net, w] : std::get<ExplicitLaw>(law).support)
      if (w > 0) support.emplace_back(net, w / total);
  }
  if (!support.empty()) check_inputs(model.stats(), support.front().first, model.attrs());

  // Fixed chunking keeps the floating-point reduction order independent of
  // the thread count.
  const std::size_t chunks = std::min<std::size_t>(support.size(), 16);
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(states, 0.0));
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> cond(states);
    for (std::size_t a = c; a < support.size(); a += chunks) {
      conditional_distribution(model, support[a].first, dyads, cond);
      const double w = support[a].second;
      for (std::size_t s = 0; s < states; ++s) partial[c][s] += w * cond[s];
    }
  });
  EntropyResult r;
  for (std::size_t s = 0; s < states; ++s) {
    double p = 0;
    for (const auto& part : partial) p += part[s];
    if (p > 0) r.entropy -= p * std::log(p);
    r.expected_edges += p * static_cast<double>(std::popcount(s));
  }
  return r;
}

namespace {

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

double safe_log(double x) { return x > 0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

// count * log_value with 0 * log 0 = 0.
double times(std::size_t count, double log_value) { return count == 0 ? 0.0 : static_cast<double>(count) * log_value; }

}  // namespace

double entropy_edgecount(double theta_D, double theta_S, std::size_t n, double q) {
  if (n < 2 || n > kMaxEdgeCountNodes) {
    throw UsageError("edge-count entropy supports 2 <= n <= " + std::to_string(kMaxEdgeCountNodes));
  }
  if (!(q >= 0 && q <= 1)) throw UsageError("Bernoulli rate must lie in [0, 1]");
  if (!std::isfinite(theta_D) || !std::isfinite(theta_S)) throw UsageError("theta entries must be finite");
  const std::size_t N = n * (n - 1);
  const double scale = 1.0 / static_cast<double>(n - 1);
  // log u and log(1-u) for the edge probability given A^1_ij = 1 and 0.
  const double x1 = (theta_D + theta_S) * scale, x0 = (theta_D - theta_S) * scale;
  const double lu1 = -softplus(-x1), lnu1 = -softplus(x1);
  const double lu0 = -softplus(-x0), lnu0 = -softplus(x0);
  const double lq = safe_log(q), lnq = safe_log(1 - q);

  std::vector<double> lfact(N + 1, 0.0);
  for (std::size_t i = 1; i <= N; ++i) lfact[i] = lfact[i - 1] + std::log(static_cast<double>(i));
  auto lchoose = [&](std::size_t a, std::size_t b) { return lfact[a] - lfact[b] - lfact[a - b]; };

  // Every A^2 with e edges has the same probability: sum over how many of
  // its edges (a) and non-edges (b) were edges of A^1.
  double h = 0;
  for (std::size_t e = 0; e <= N; ++e) {
    double on = -std::numeric_limits<double>::infinity(), off = on;
    for (std::size_t a = 0; a <= e; ++a) {
      on = log_sum_exp(on, lchoose(e, a) + times(a, lq + lu1) + times(e - a, lnq + lu0));
    }
    for (std::size_t b = 0; b <= N - e; ++b) {
      off = log_sum_exp(off, lchoose(N - e, b) + times(b, lq + lnu1) + times(N - e - b, lnq + lnu0));
    }
    const double lp = on + off;
    if (lp == -std::numeric_limits<double>::infinity()) continue;
    h -= std::exp(lchoose(N, e) + lp) * lp;
  }
  return h;
}

}  // namespace tergm
