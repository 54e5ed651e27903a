#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tergm/network.hpp"

namespace tergm {

/// A transition statistic Psi_m(A^t, A^{t-1}).
///
/// Factorized statistics decompose as sum_ij psi_ij(A^t_ij, A^{t-1}); for
/// those, change_scores() fills delta_ij = psi_ij(1, .) - psi_ij(0, .) and
/// returns base = sum_ij psi_ij(0, .). Non-factorized ("general") statistics
/// only provide evaluate() and are accepted by the Gibbs-based paths.
class Statistic {
 public:
  virtual ~Statistic() = default;

  virtual std::string name() const = 0;
  virtual bool requires_labels() const { return false; }
  virtual bool factorized() const { return true; }

  virtual double evaluate(const Network& current, const Network& previous,
                          const NodeAttributeTable* attrs) const = 0;

  /// `delta` has n*n slots, row-major; diagonal entries are left at zero.
  virtual double change_scores(const Network& previous, const NodeAttributeTable* attrs,
                               std::span<double> delta) const;

  /// Psi(current with (i,j)=1) - Psi(current with (i,j)=0), previous fixed.
  virtual double toggle_change(const Network& current, const Network& previous,
                               const NodeAttributeTable* attrs, std::size_t i, std::size_t j) const;

  /// Per-dyad range bound beta: |psi_ij(a, .)| <= beta for both a. With a
  /// previous network the bound is exact for that instance, otherwise it must
  /// hold for every A^{t-1}. nullopt when no bound is known.
  virtual std::optional<double> edge_bound(std::size_t n, const Network* previous,
                                           const NodeAttributeTable* attrs) const;
};

using StatisticPtr = std::shared_ptr<const Statistic>;

enum class BuiltinKind { D, S, R, T, WD, BD, WR, BR, RT, CSd, CSg, P, G };

/// The thirteen built-in statistics.
class BuiltinStatistic final : public Statistic {
 public:
  explicit BuiltinStatistic(BuiltinKind kind) : kind_(kind) {}

  BuiltinKind kind() const noexcept { return kind_; }
  std::string name() const override;
  bool requires_labels() const override;

  double evaluate(const Network& current, const Network& previous, const NodeAttributeTable* attrs) const override;
  double change_scores(const Network& previous, const NodeAttributeTable* attrs,
                       std::span<double> delta) const override;
  std::optional<double> edge_bound(std::size_t n, const Network* previous,
                                   const NodeAttributeTable* attrs) const override;

 private:
  BuiltinKind kind_;
};

/// User statistic in factorized form: the callback fills delta and returns base.
class CustomFactorizedStatistic final : public Statistic {
 public:
  using ChangeFn = std::function<double(const Network& previous, const NodeAttributeTable* attrs,
                                        std::span<double> delta)>;

  CustomFactorizedStatistic(std::string name, ChangeFn fn, std::optional<double> beta = std::nullopt,
                            bool requires_labels = false);

  std::string name() const override { return name_; }
  bool requires_labels() const override { return requires_labels_; }
  double evaluate(const Network& current, const Network& previous, const NodeAttributeTable* attrs) const override;
  double change_scores(const Network& previous, const NodeAttributeTable* attrs,
                       std::span<double> delta) const override;
  std::optional<double> edge_bound(std::size_t n, const Network* previous,
                                   const NodeAttributeTable* attrs) const override;

 private:
  std::string name_;
  ChangeFn fn_;
  std::optional<double> beta_;
  bool requires_labels_;
};

/// User statistic that need not factor over dyads of A^t.
class GeneralStatistic final : public Statistic {
 public:
  using EvalFn = std::function<double(const Network& current, const Network& previous,
                                      const NodeAttributeTable* attrs)>;

  GeneralStatistic(std::string name, EvalFn fn, bool requires_labels = false);

  std::string name() const override { return name_; }
  bool requires_labels() const override { return requires_labels_; }
  bool factorized() const override { return false; }
  double evaluate(const Network& current, const Network& previous, const NodeAttributeTable* attrs) const override;

 private:
  std::string name_;
  EvalFn fn_;
  bool requires_labels_;
};

std::optional<BuiltinKind> builtin_kind(const std::string& name);
StatisticPtr make_builtin(BuiltinKind kind);
/// Throws UsageError for names outside the built-in registry.
StatisticPtr make_statistic(const std::string& name);
const std::vector<BuiltinKind>& all_builtin_kinds();

/// Ordered collection; parameter index m always refers to statistic m.
class StatisticSet {
 public:
  StatisticSet() = default;
  explicit StatisticSet(std::vector<StatisticPtr> stats);

  /// Comma-separated built-in names, e.g. "D,S,R,T".
  static StatisticSet parse(const std::string& spec);
  static StatisticSet from_names(const std::vector<std::string>& names);

  std::size_t size() const noexcept { return stats_.size(); }
  bool empty() const noexcept { return stats_.empty(); }
  const Statistic& operator[](std::size_t m) const { return *stats_[m]; }
  const StatisticPtr& ptr(std::size_t m) const { return stats_[m]; }

  std::vector<std::string> names() const;
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool factorized() const;
  bool requires_labels() const;

  /// Throws UnsupportedModelError naming the first non-factorized statistic.
  void require_factorized(const std::string& what) const;

 private:
  std::vector<StatisticPtr> stats_;
};

/// delta[m][i][j] and base[m] for one A^{t-1}; stored pair-major so that the
/// k change scores of a dyad are contiguous.
class ChangeScoreTable {
 public:
  ChangeScoreTable() = default;
  ChangeScoreTable(std::size_t k, std::size_t n);

  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return n_; }

  double delta(std::size_t m, std::size_t i, std::size_t j) const { return delta_[(i * n_ + j) * k_ + m]; }
  double& delta(std::size_t m, std::size_t i, std::size_t j) { return delta_[(i * n_ + j) * k_ + m]; }
  std::span<const double> dyad(std::size_t i, std::size_t j) const {
    return {delta_.data() + (i * n_ + j) * k_, k_};
  }
  const std::vector<double>& base() const noexcept { return base_; }
  std::vector<double>& base() noexcept { return base_; }

  /// base + sum_ij A_ij * delta_ij.
  std::vector<double> reconstruct(const Network& current) const;

 private:
  std::size_t k_ = 0;
  std::size_t n_ = 0;
  std::vector<double> base_;
  std::vector<double> delta_;
};

/// Throws DataError on dimension mismatch or missing labels.
void check_inputs(const StatisticSet& stats, const Network& previous, const NodeAttributeTable* attrs);

double evaluate(const Statistic& stat, const Network& current, const Network& previous,
                const NodeAttributeTable* attrs = nullptr);
std::vector<double> evaluate_all(const StatisticSet& stats, const Network& current, const Network& previous,
                                 const NodeAttributeTable* attrs = nullptr);
ChangeScoreTable change_scores(const StatisticSet& stats, const Network& previous,
                               const NodeAttributeTable* attrs = nullptr);

/// Incremental Psi(N, N) for the static ERGM used to draw initial networks.
/// Built-in statistics are maintained from O(1) counts updated in O(n) per
/// toggle; any other statistic falls back to full evaluation.
class SelfStatisticsTracker {
 public:
  SelfStatisticsTracker(const StatisticSet& stats, Network start, const NodeAttributeTable* attrs);

  const Network& network() const noexcept { return net_; }
  std::vector<double> values() const;

  /// Psi(N with (i,j)=1, same) - Psi(N with (i,j)=0, same).
  std::vector<double> toggle_change(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, bool value);

 private:
  struct Counts {
    double edges = 0, edges_within = 0;
    double mutual = 0, mutual_within = 0;  // ordered pairs with both directions
    double transitive = 0, cyclic = 0, two_paths = 0;
    double out_pairs = 0, in_pairs = 0;  // sum d(d-1)
  };

  Counts counts_without(std::size_t i, std::size_t j) const;
  Counts counts_with(const Counts& without, std::size_t i, std::size_t j) const;
  double value_of(std::size_t m, const Counts& c, const Network& net) const;

  StatisticSet stats_;
  const NodeAttributeTable* attrs_;
  Network net_;
  std::vector<std::size_t> out_deg_, in_deg_;
  Counts counts_;
};

}  // namespace tergm
