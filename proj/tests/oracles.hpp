#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the change-score machinery: probabilities come from evaluate_all on every
// enumerated network, derivatives from finite differences.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "tergm/network.hpp"
#include "tergm/statistics.hpp"
#include "tergm/transition_model.hpp"

namespace oracle {

using tergm::Network;

// Network whose off-diagonal entries, in row-major order, are the bits of `code`.
inline Network from_code(std::size_t n, std::uint64_t code) {
  Network a(n);
  std::size_t bit = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) a.set(i, j, (code >> bit++) & 1u);
  return a;
}

inline std::size_t state_count(std::size_t n) { return std::size_t{1} << (n * (n - 1)); }

inline Network random_network(std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  Network a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) a.set(i, j, coin(rng));
  return a;
}

inline double log_sum_exp(const std::vector<double>& v) {
  double m = -INFINITY;
  for (double x : v) m = std::max(m, x);
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Full conditional law of A^t given A^{t-1}: log P for every state code.
inline std::vector<double> transition_log_probs(const tergm::StatisticSet& stats, const std::vector<double>& theta,
                                                const Network& prev, const tergm::NodeAttributeTable* attrs) {
  const std::size_t n = prev.size();
  std::vector<double> lw(state_count(n));
  for (std::uint64_t c = 0; c < lw.size(); ++c) {
    const auto psi = tergm::evaluate_all(stats, from_code(n, c), prev, attrs);
    double s = 0;
    for (std::size_t m = 0; m < psi.size(); ++m) s += theta[m] * psi[m];
    lw[c] = s;
  }
  const double lz = log_sum_exp(lw);
  for (double& x : lw) x -= lz;
  return lw;
}

inline double edge_probability(const std::vector<double>& log_probs, std::size_t n, std::size_t i, std::size_t j) {
  double p = 0;
  for (std::uint64_t c = 0; c < log_probs.size(); ++c)
    if (from_code(n, c)(i, j)) p += std::exp(log_probs[c]);
  return p;
}

inline std::uint64_t code_of(const Network& a) {
  std::uint64_t code = 0;
  std::size_t bit = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j) code |= std::uint64_t(a(i, j)) << bit++;
  return code;
}

inline double series_log_likelihood(const tergm::StatisticSet& stats, const std::vector<double>& theta,
                                    const tergm::NetworkSeries& series, const tergm::NodeAttributeTable* attrs) {
  double l = 0;
  for (std::size_t t = 1; t < series.length(); ++t) {
    const auto lp = transition_log_probs(stats, theta, series[t - 1], attrs);
    l += lp[code_of(series[t])];
  }
  return l;
}

// Central differences of a scalar function.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double fp = f(x);
    x[i] = x0 - h;
    const double fm = f(x);
    x[i] = x0;
    g[i] = (fp - fm) / (2 * h);
  }
  return g;
}

// Jacobian of a vector function by central differences; J[r][c] = d f_r / d x_c.
inline std::vector<std::vector<double>> fd_jacobian(
    const std::function<std::vector<double>(const std::vector<double>&)>& f, std::vector<double> x,
    double h = 1e-5) {
  std::vector<std::vector<double>> J;
  for (std::size_t c = 0; c < x.size(); ++c) {
    const double x0 = x[c];
    x[c] = x0 + h;
    const auto fp = f(x);
    x[c] = x0 - h;
    const auto fm = f(x);
    x[c] = x0;
    if (J.empty()) J.assign(fp.size(), std::vector<double>(x.size()));
    for (std::size_t r = 0; r < fp.size(); ++r) J[r][c] = (fp[r] - fm[r]) / (2 * h);
  }
  return J;
}

// Under {D, S} with A^1 ~ Bernoulli(q) every entry of A^2 is an independent
// Bernoulli(r) with r = q*sigma((tD+tS)/(n-1)) + (1-q)*sigma((tD-tS)/(n-1)).
inline double dyad_marginal(double tD, double tS, std::size_t n, double q) {
  const double s = 1.0 / (static_cast<double>(n) - 1.0);
  auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  return q * sig((tD + tS) * s) + (1 - q) * sig((tD - tS) * s);
}

inline double closed_form_entropy(double tD, double tS, std::size_t n, double q) {
  const double r = dyad_marginal(tD, tS, n, q);
  auto h = [](double p) { return (p > 0 ? -p * std::log(p) : 0.0) + (p < 1 ? -(1 - p) * std::log1p(-p) : 0.0); };
  return static_cast<double>(n * (n - 1)) * h(r);
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle
