#include "tergm/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tergm/error.hpp"

namespace tergm {

namespace {

struct KindInfo {
  BuiltinKind kind;
  const char* name;
  bool labels;
};

constexpr KindInfo kKinds[] = {
    {BuiltinKind::D, "D", false},     {BuiltinKind::S, "S", false},     {BuiltinKind::R, "R", false},
    {BuiltinKind::T, "T", false},     {BuiltinKind::WD, "WD", true},    {BuiltinKind::BD, "BD", true},
    {BuiltinKind::WR, "WR", true},    {BuiltinKind::BR, "BR", true},    {BuiltinKind::RT, "RT", false},
    {BuiltinKind::CSd, "CSd", false}, {BuiltinKind::CSg, "CSg", false}, {BuiltinKind::P, "P", false},
    {BuiltinKind::G, "G", false},
};

const KindInfo& info(BuiltinKind k) {
  for (const auto& i : kKinds)
    if (i.kind == k) return i;
  throw std::logic_error("unknown builtin kind");
}

bool is_ratio(BuiltinKind k) {
  switch (k) {
    case BuiltinKind::D:
    case BuiltinKind::S:
    case BuiltinKind::WD:
    case BuiltinKind::BD:
      return false;
    default:
      return true;
  }
}

double ratio(double n, double num, double den) { return den > 0 ? n * num / den : 0.0; }

// Dense integer product helpers over the 0/1 adjacency; diagonal excluded by
// the zero diagonal of the inputs.
std::vector<int> two_path_counts(const Network& a) {  // (A*A)_ik
  const std::size_t n = a.size();
  std::vector<int> out(n * n, 0);
  const auto& d = a.data();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!d[i * n + j]) continue;
      for (std::size_t k = 0; k < n; ++k) out[i * n + k] += d[j * n + k];
    }
  return out;
}

std::vector<int> common_source_counts(const Network& a) {  // (A^T A)_ij = #{k: A_ki A_kj}
  const std::size_t n = a.size();
  std::vector<int> out(n * n, 0);
  const auto& d = a.data();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!d[k * n + i]) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += d[k * n + j];
    }
  return out;
}

std::vector<int> common_target_counts(const Network& a) {  // (A A^T)_ij = #{k: A_ik A_jk}
  const std::size_t n = a.size();
  std::vector<int> out(n * n, 0);
  const auto& d = a.data();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int c = 0;
      for (std::size_t k = 0; k < n; ++k) c += d[i * n + k] & d[j * n + k];
      out[i * n + j] = c;
    }
  return out;
}

const NodeAttributeTable& labels_or_throw(const NodeAttributeTable* attrs, const std::string& name) {
  if (!attrs) throw DataError("statistic " + name + " requires node labels");
  return *attrs;
}

}  // namespace

// ---------------------------------------------------------------- Statistic

double Statistic::change_scores(const Network&, const NodeAttributeTable*, std::span<double>) const {
  throw UnsupportedModelError("statistic " + name() + " is not edge-factorized");
}

double Statistic::toggle_change(const Network& current, const Network& previous, const NodeAttributeTable* attrs,
                                std::size_t i, std::size_t j) const {
  Network with = current;
  with.set(i, j, true);
  Network without = current;
  without.set(i, j, false);
  return evaluate(with, previous, attrs) - evaluate(without, previous, attrs);
}

std::optional<double> Statistic::edge_bound(std::size_t, const Network*, const NodeAttributeTable*) const {
  return std::nullopt;
}

// --------------------------------------------------------- BuiltinStatistic

std::string BuiltinStatistic::name() const { return info(kind_).name; }

bool BuiltinStatistic::requires_labels() const { return info(kind_).labels; }

double BuiltinStatistic::evaluate(const Network& cur, const Network& prev, const NodeAttributeTable* attrs) const {
  const std::size_t n = cur.size();
  if (n < 2) return 0.0;
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / (nd - 1.0);
  const NodeAttributeTable* lab = requires_labels() ? &labels_or_throw(attrs, name()) : nullptr;
  auto P = [&](std::size_t i, std::size_t j) { return lab->same_group(i, j) ? 1.0 : 0.0; };
  auto pairs = [&](auto&& term) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += term(i, j);
    return s;
  };
  auto triples = [&](auto&& term) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        for (std::size_t k = 0; k < n; ++k)
          if (k != i && k != j) s += term(i, j, k);
      }
    return s;
  };

  switch (kind_) {
    case BuiltinKind::D:
      return scale * pairs([&](auto i, auto j) { return double(cur(i, j)); });
    case BuiltinKind::S:
      return scale * pairs([&](auto i, auto j) { return cur(i, j) == prev(i, j) ? 1.0 : 0.0; });
    case BuiltinKind::WD:
      return scale * pairs([&](auto i, auto j) { return cur(i, j) * P(i, j); });
    case BuiltinKind::BD:
      return scale * pairs([&](auto i, auto j) { return cur(i, j) * (1.0 - P(i, j)); });
    case BuiltinKind::R:
      return ratio(nd, pairs([&](auto i, auto j) { return double(cur(j, i) && prev(i, j)); }),
                   pairs([&](auto i, auto j) { return double(prev(i, j)); }));
    case BuiltinKind::WR:
      return ratio(nd, pairs([&](auto i, auto j) { return (cur(j, i) && prev(i, j)) * P(i, j); }),
                   pairs([&](auto i, auto j) { return prev(i, j) * P(i, j); }));
    case BuiltinKind::BR:
      return ratio(nd, pairs([&](auto i, auto j) { return (cur(j, i) && prev(i, j)) * (1.0 - P(i, j)); }),
                   pairs([&](auto i, auto j) { return prev(i, j) * (1.0 - P(i, j)); }));
    case BuiltinKind::T:
      return ratio(nd, triples([&](auto i, auto j, auto k) { return double(cur(i, k) && prev(i, j) && prev(j, k)); }),
                   triples([&](auto i, auto j, auto k) { return double(prev(i, j) && prev(j, k)); }));
    case BuiltinKind::RT:
      return ratio(nd, triples([&](auto i, auto j, auto k) { return double(prev(j, k) && prev(k, i) && cur(i, j)); }),
                   triples([&](auto i, auto j, auto k) { return double(prev(j, k) && prev(k, i)); }));
    case BuiltinKind::CSd:
      return ratio(nd, triples([&](auto i, auto j, auto k) { return double(prev(k, i) && prev(k, j) && cur(i, j)); }),
                   triples([&](auto i, auto j, auto k) { return double(prev(k, i) && prev(k, j)); }));
    case BuiltinKind::CSg:
      return ratio(nd, triples([&](auto i, auto j, auto k) { return double(prev(i, k) && prev(j, k) && cur(i, j)); }),
                   triples([&](auto i, auto j, auto k) { return double(prev(i, k) && prev(j, k)); }));
    case BuiltinKind::P:
      return ratio(nd, triples([&](auto i, auto j, auto k) { return double(prev(k, j) && cur(i, j)); }),
                   triples([&](auto, auto j, auto k) { return double(prev(k, j)); }));
    case BuiltinKind::G:
      return ratio(nd, triples([&](auto i, auto j, auto k) { return double(prev(i, k) && cur(i, j)); }),
                   triples([&](auto i, auto, auto k) { return double(prev(i, k)); }));
  }
  return 0.0;
}

double BuiltinStatistic::change_scores(const Network& prev, const NodeAttributeTable* attrs,
                                       std::span<double> delta) const {
  const std::size_t n = prev.size();
  std::fill(delta.begin(), delta.end(), 0.0);
  if (n < 2) return 0.0;
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / (nd - 1.0);
  const auto& a = prev.data();
  const NodeAttributeTable* lab = requires_labels() ? &labels_or_throw(attrs, name()) : nullptr;

  // Fills delta_ij = n * count(i, j) / den for ratio statistics.
  auto fill_ratio = [&](auto&& count, double den) {
    if (den <= 0) return;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) delta[i * n + j] = nd * static_cast<double>(count(i, j)) / den;
  };

  double base = 0.0;
  switch (kind_) {
    case BuiltinKind::D:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) delta[i * n + j] = scale;
      break;
    case BuiltinKind::S:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          const double p = a[i * n + j];
          delta[i * n + j] = (2.0 * p - 1.0) * scale;
          base += (1.0 - p) * scale;
        }
      break;
    case BuiltinKind::WD:
    case BuiltinKind::BD: {
      const bool within = kind_ == BuiltinKind::WD;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j && lab->same_group(i, j) == within) delta[i * n + j] = scale;
      break;
    }
    case BuiltinKind::R:
      fill_ratio([&](auto i, auto j) { return a[j * n + i]; }, static_cast<double>(edge_count(prev)));
      break;
    case BuiltinKind::WR:
    case BuiltinKind::BR: {
      const bool within = kind_ == BuiltinKind::WR;
      double den = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j && lab->same_group(i, j) == within) den += a[i * n + j];
      fill_ratio([&](auto i, auto j) { return lab->same_group(i, j) == within ? a[j * n + i] : 0; }, den);
      break;
    }
    case BuiltinKind::T:
    case BuiltinKind::RT: {
      const auto paths = two_path_counts(prev);
      double den = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          if (i != k) den += paths[i * n + k];
      if (kind_ == BuiltinKind::T) {
        fill_ratio([&](auto i, auto k) { return paths[i * n + k]; }, den);
      } else {
        fill_ratio([&](auto i, auto j) { return paths[j * n + i]; }, den);
      }
      break;
    }
    case BuiltinKind::CSd:
    case BuiltinKind::CSg: {
      const auto common = kind_ == BuiltinKind::CSd ? common_source_counts(prev) : common_target_counts(prev);
      double den = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) den += common[i * n + j];
      fill_ratio([&](auto i, auto j) { return common[i * n + j]; }, den);
      break;
    }
    case BuiltinKind::P:
    case BuiltinKind::G: {
      const double den = (nd - 2.0) * static_cast<double>(edge_count(prev));
      std::vector<int> deg(n);
      for (std::size_t v = 0; v < n; ++v)
        deg[v] = static_cast<int>(kind_ == BuiltinKind::P ? prev.in_degree(v) : prev.out_degree(v));
      if (kind_ == BuiltinKind::P) {
        fill_ratio([&](auto i, auto j) { return deg[j] - a[i * n + j]; }, den);
      } else {
        fill_ratio([&](auto i, auto j) { return deg[i] - a[i * n + j]; }, den);
      }
      break;
    }
  }
  return base;
}

std::optional<double> BuiltinStatistic::edge_bound(std::size_t n, const Network* prev,
                                                   const NodeAttributeTable* attrs) const {
  if (n < 2) return 0.0;
  const double scale = 1.0 / (static_cast<double>(n) - 1.0);
  if (!prev) return is_ratio(kind_) ? static_cast<double>(n) : scale;
  if (kind_ == BuiltinKind::S) return scale;
  // Every other built-in has psi_ij(0, .) = 0, so the bound is max |delta|.
  std::vector<double> delta(n * n);
  change_scores(*prev, attrs, delta);
  double beta = 0;
  for (double d : delta) beta = std::max(beta, std::abs(d));
  return beta;
}

// ------------------------------------------------------------ custom kinds

CustomFactorizedStatistic::CustomFactorizedStatistic(std::string name, ChangeFn fn, std::optional<double> beta,
                                                     bool requires_labels)
    : name_(std::move(name)), fn_(std::move(fn)), beta_(beta), requires_labels_(requires_labels) {}

double CustomFactorizedStatistic::evaluate(const Network& cur, const Network& prev,
                                           const NodeAttributeTable* attrs) const {
  const std::size_t n = prev.size();
  std::vector<double> delta(n * n, 0.0);
  double value = fn_(prev, attrs, delta);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && cur(i, j)) value += delta[i * n + j];
  return value;
}

double CustomFactorizedStatistic::change_scores(const Network& prev, const NodeAttributeTable* attrs,
                                                std::span<double> delta) const {
  std::fill(delta.begin(), delta.end(), 0.0);
  const double base = fn_(prev, attrs, delta);
  const std::size_t n = prev.size();
  for (std::size_t i = 0; i < n; ++i) delta[i * n + i] = 0.0;
  return base;
}

std::optional<double> CustomFactorizedStatistic::edge_bound(std::size_t, const Network*,
                                                            const NodeAttributeTable*) const {
  return beta_;
}

GeneralStatistic::GeneralStatistic(std::string name, EvalFn fn, bool requires_labels)
    : name_(std::move(name)), fn_(std::move(fn)), requires_labels_(requires_labels) {}

double GeneralStatistic::evaluate(const Network& cur, const Network& prev, const NodeAttributeTable* attrs) const {
  return fn_(cur, prev, attrs);
}

// ---------------------------------------------------------------- registry

std::optional<BuiltinKind> builtin_kind(const std::string& name) {
  for (const auto& i : kKinds)
    if (name == i.name) return i.kind;
  return std::nullopt;
}

StatisticPtr make_builtin(BuiltinKind kind) { return std::make_shared<BuiltinStatistic>(kind); }

StatisticPtr make_statistic(const std::string& name) {
  const auto kind = builtin_kind(name);
  if (!kind) {
    std::string known;
    for (const auto& i : kKinds) known += (known.empty() ? "" : ",") + std::string(i.name);
    throw UsageError("unknown statistic '" + name + "' (built-ins: " + known + ")");
  }
  return make_builtin(*kind);
}

const std::vector<BuiltinKind>& all_builtin_kinds() {
  static const std::vector<BuiltinKind> kinds = [] {
    std::vector<BuiltinKind> v;
    for (const auto& i : kKinds) v.push_back(i.kind);
    return v;
  }();
  return kinds;
}

// ------------------------------------------------------------ StatisticSet

StatisticSet::StatisticSet(std::vector<StatisticPtr> stats) : stats_(std::move(stats)) {
  for (std::size_t a = 0; a < stats_.size(); ++a) {
    if (!stats_[a]) throw UsageError("null statistic in set");
    for (std::size_t b = 0; b < a; ++b)
      if (stats_[a]->name() == stats_[b]->name()) throw UsageError("duplicate statistic '" + stats_[a]->name() + "'");
  }
}

StatisticSet StatisticSet::parse(const std::string& spec) {
  std::vector<std::string> names;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (!tok.empty()) names.push_back(tok);
  }
  if (names.empty()) throw UsageError("empty statistic list");
  return from_names(names);
}

StatisticSet StatisticSet::from_names(const std::vector<std::string>& names) {
  std::vector<StatisticPtr> stats;
  for (const auto& n : names) stats.push_back(make_statistic(n));
  return StatisticSet(std::move(stats));
}

std::vector<std::string> StatisticSet::names() const {
  std::vector<std::string> out;
  for (const auto& s : stats_) out.push_back(s->name());
  return out;
}

std::optional<std::size_t> StatisticSet::index_of(const std::string& name) const {
  for (std::size_t m = 0; m < stats_.size(); ++m)
    if (stats_[m]->name() == name) return m;
  return std::nullopt;
}

bool StatisticSet::factorized() const {
  return std::all_of(stats_.begin(), stats_.end(), [](const auto& s) { return s->factorized(); });
}

bool StatisticSet::requires_labels() const {
  return std::any_of(stats_.begin(), stats_.end(), [](const auto& s) { return s->requires_labels(); });
}

void StatisticSet::require_factorized(const std::string& what) const {
  for (const auto& s : stats_)
    if (!s->factorized()) throw UnsupportedModelError(what + " requires edge-factorized statistics; '" + s->name() + "' is not");
}

// --------------------------------------------------------- ChangeScoreTable

ChangeScoreTable::ChangeScoreTable(std::size_t k, std::size_t n) : k_(k), n_(n), base_(k, 0.0), delta_(k * n * n, 0.0) {}

std::vector<double> ChangeScoreTable::reconstruct(const Network& cur) const {
  std::vector<double> out = base_;
  const auto& a = cur.data();
  for (std::size_t p = 0; p < n_ * n_; ++p) {
    if (!a[p]) continue;
    const double* d = delta_.data() + p * k_;
    for (std::size_t m = 0; m < k_; ++m) out[m] += d[m];
  }
  return out;
}

void check_inputs(const StatisticSet& stats, const Network& prev, const NodeAttributeTable* attrs) {
  if (stats.requires_labels()) {
    if (!attrs) {
      for (std::size_t m = 0; m < stats.size(); ++m)
        if (stats[m].requires_labels()) throw DataError("statistic " + stats[m].name() + " requires node labels");
    }
    if (attrs->size() != prev.size()) throw DataError("label table size does not match network size");
  }
}

double evaluate(const Statistic& stat, const Network& cur, const Network& prev, const NodeAttributeTable* attrs) {
  if (cur.size() != prev.size()) throw DataError("networks differ in size");
  if (stat.requires_labels() && attrs && attrs->size() != cur.size()) {
    throw DataError("label table size does not match network size");
  }
  return stat.evaluate(cur, prev, attrs);
}

std::vector<double> evaluate_all(const StatisticSet& stats, const Network& cur, const Network& prev,
                                 const NodeAttributeTable* attrs) {
  if (cur.size() != prev.size()) throw DataError("networks differ in size");
  check_inputs(stats, prev, attrs);
  std::vector<double> out(stats.size());
  for (std::size_t m = 0; m < stats.size(); ++m) out[m] = stats[m].evaluate(cur, prev, attrs);
  return out;
}

ChangeScoreTable change_scores(const StatisticSet& stats, const Network& prev, const NodeAttributeTable* attrs) {
  stats.require_factorized("change-score computation");
  check_inputs(stats, prev, attrs);
  const std::size_t n = prev.size();
  const std::size_t k = stats.size();
  ChangeScoreTable table(k, n);
  std::vector<double> scratch(n * n);
  for (std::size_t m = 0; m < k; ++m) {
    table.base()[m] = stats[m].change_scores(prev, attrs, scratch);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) table.delta(m, i, j) = i == j ? 0.0 : scratch[i * n + j];
  }
  return table;
}

// ----------------------------------------------------- SelfStatisticsTracker

SelfStatisticsTracker::SelfStatisticsTracker(const StatisticSet& stats, Network start, const NodeAttributeTable* attrs)
    : stats_(stats), attrs_(attrs), net_(std::move(start)) {
  check_inputs(stats_, net_, attrs_);
  const std::size_t n = net_.size();
  out_deg_.assign(n, 0);
  in_deg_.assign(n, 0);
  Network empty(n);
  Network built = empty;
  // Accumulate counts by inserting edges one at a time into an empty graph.
  std::swap(net_, built);
  counts_ = Counts{};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && built(i, j)) set(i, j, true);
}

SelfStatisticsTracker::Counts SelfStatisticsTracker::counts_without(std::size_t i, std::size_t j) const {
  if (!net_(i, j)) return counts_;
  const Counts inc = counts_with(Counts{}, i, j);
  Counts c = counts_;
  c.edges -= inc.edges;
  c.edges_within -= inc.edges_within;
  c.mutual -= inc.mutual;
  c.mutual_within -= inc.mutual_within;
  c.transitive -= inc.transitive;
  c.cyclic -= inc.cyclic;
  c.two_paths -= inc.two_paths;
  c.out_pairs -= inc.out_pairs;
  c.in_pairs -= inc.in_pairs;
  return c;
}

// Adds the contribution of edge (i,j) to `base`, where every count in `base`
// excludes that edge. The neighbourhood sums never touch the pair (i,j) itself.
SelfStatisticsTracker::Counts SelfStatisticsTracker::counts_with(const Counts& base, std::size_t i,
                                                                 std::size_t j) const {
  const std::size_t n = net_.size();
  const auto& a = net_.data();
  const double within = attrs_ && attrs_->same_group(i, j) ? 1.0 : 0.0;
  const double back = a[j * n + i];
  const double own = a[i * n + j];
  double trans = 0, cyc = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const int im = a[i * n + m], mj = a[m * n + j], jm = a[j * n + m], mi = a[m * n + i];
    trans += (im & mj) + (im & jm) + (mi & mj);
    cyc += jm & mi;
  }
  Counts c = base;
  c.edges += 1;
  c.edges_within += within;
  c.mutual += 2 * back;
  c.mutual_within += 2 * back * within;
  c.transitive += trans;
  c.cyclic += 3 * cyc;
  c.two_paths += (static_cast<double>(out_deg_[j]) - back) + (static_cast<double>(in_deg_[i]) - back);
  c.out_pairs += 2 * (static_cast<double>(out_deg_[i]) - own);
  c.in_pairs += 2 * (static_cast<double>(in_deg_[j]) - own);
  return c;
}

double SelfStatisticsTracker::value_of(std::size_t m, const Counts& c, const Network& net) const {
  const auto* builtin = dynamic_cast<const BuiltinStatistic*>(&stats_[m]);
  if (!builtin) return stats_[m].evaluate(net, net, attrs_);
  const double n = static_cast<double>(net_.size());
  if (n < 2) return 0.0;
  const double scale = 1.0 / (n - 1.0);
  switch (builtin->kind()) {
    case BuiltinKind::D: return c.edges * scale;
    case BuiltinKind::S: return n;
    case BuiltinKind::WD: return c.edges_within * scale;
    case BuiltinKind::BD: return (c.edges - c.edges_within) * scale;
    case BuiltinKind::R: return ratio(n, c.mutual, c.edges);
    case BuiltinKind::WR: return ratio(n, c.mutual_within, c.edges_within);
    case BuiltinKind::BR: return ratio(n, c.mutual - c.mutual_within, c.edges - c.edges_within);
    case BuiltinKind::T: return ratio(n, c.transitive, c.two_paths);
    case BuiltinKind::RT: return ratio(n, c.cyclic, c.two_paths);
    case BuiltinKind::CSd: return ratio(n, c.transitive, c.out_pairs);
    case BuiltinKind::CSg: return ratio(n, c.transitive, c.in_pairs);
    case BuiltinKind::P: return ratio(n, c.in_pairs, (n - 2.0) * c.edges);
    case BuiltinKind::G: return ratio(n, c.out_pairs, (n - 2.0) * c.edges);
  }
  return 0.0;
}

std::vector<double> SelfStatisticsTracker::values() const {
  std::vector<double> out(stats_.size());
  for (std::size_t m = 0; m < stats_.size(); ++m) out[m] = value_of(m, counts_, net_);
  return out;
}

std::vector<double> SelfStatisticsTracker::toggle_change(std::size_t i, std::size_t j) const {
  const Counts without = counts_without(i, j);
  const Counts with = counts_with(without, i, j);
  bool needs_networks = false;
  for (std::size_t m = 0; m < stats_.size(); ++m)
    if (!dynamic_cast<const BuiltinStatistic*>(&stats_[m])) needs_networks = true;
  Network net_with, net_without;
  if (needs_networks) {
    net_with = net_;
    net_with.set(i, j, true);
    net_without = net_;
    net_without.set(i, j, false);
  }
  std::vector<double> out(stats_.size());
  for (std::size_t m = 0; m < stats_.size(); ++m) out[m] = value_of(m, with, net_with) - value_of(m, without, net_without);
  return out;
}

void SelfStatisticsTracker::set(std::size_t i, std::size_t j, bool value) {
  if (net_(i, j) == value) return;
  if (value) {
    counts_ = counts_with(counts_, i, j);
    net_.set(i, j, true);
    ++out_deg_[i];
    ++in_deg_[j];
  } else {
    counts_ = counts_without(i, j);
    net_.set(i, j, false);
    --out_deg_[i];
    --in_deg_[j];
  }
}

}  // namespace tergm
