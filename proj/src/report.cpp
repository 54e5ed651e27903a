#include "tergm/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "tergm/error.hpp"

namespace tergm {

namespace {

// NaN and infinities are not JSON; emit null instead.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json named(const std::vector<double>& theta, const StatisticSet& stats) {
  Json o = Json::object();
  for (std::size_t m = 0; m < theta.size() && m < stats.size(); ++m) o[stats[m].name()] = number(theta[m]);
  return o;
}

template <class T>
void read_key(const Json& j, const char* key, T& out) {
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const std::string& what) {
  if (!j.is_object()) throw UsageError(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw UsageError("unknown " + what + " key '" + key + "'");
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

Json to_json(const FitConfig& c) {
  Json j;
  j["max_iterations"] = c.max_iterations;
  j["convergence_epsilon"] = c.convergence_epsilon;
  j["B_initial"] = c.B_initial;
  j["B_boost"] = c.B_boost;
  j["B_boost_trigger"] = c.B_boost_trigger;
  j["step_damping"] = c.step_damping;
  j["seed"] = c.seed;
  j["initial_theta"] = c.initial_theta ? numbers(*c.initial_theta) : Json(nullptr);
  j["line_search"] = c.line_search;
  j["gradient_tolerance"] = c.gradient_tolerance;
  j["gibbs_burn_in"] = c.gibbs_burn_in;
  j["gibbs_thinning"] = c.gibbs_thinning;
  j["exact_moments"] = c.exact_moments;
  j["max_step_halvings"] = c.max_step_halvings;
  j["max_step_norm"] = c.max_step_norm;
  return j;
}

void apply_json(FitConfig& c, const Json& j) {
  reject_unknown(j,
                 {"max_iterations", "convergence_epsilon", "B_initial", "B_boost", "B_boost_trigger", "step_damping",
                  "seed", "initial_theta", "line_search", "gradient_tolerance", "gibbs_burn_in", "gibbs_thinning",
                  "exact_moments", "max_step_halvings", "max_step_norm"},
                 "fit config");
  if (j.contains("max_iterations")) read_key(j, "max_iterations", c.max_iterations);
  if (j.contains("convergence_epsilon")) read_key(j, "convergence_epsilon", c.convergence_epsilon);
  if (j.contains("B_initial")) read_key(j, "B_initial", c.B_initial);
  if (j.contains("B_boost")) read_key(j, "B_boost", c.B_boost);
  if (j.contains("B_boost_trigger")) read_key(j, "B_boost_trigger", c.B_boost_trigger);
  if (j.contains("step_damping")) read_key(j, "step_damping", c.step_damping);
  if (j.contains("seed")) read_key(j, "seed", c.seed);
  if (j.contains("initial_theta") && !j["initial_theta"].is_null()) {
    std::vector<double> theta;
    read_key(j, "initial_theta", theta);
    c.initial_theta = theta;
  }
  if (j.contains("line_search")) read_key(j, "line_search", c.line_search);
  if (j.contains("gradient_tolerance")) read_key(j, "gradient_tolerance", c.gradient_tolerance);
  if (j.contains("gibbs_burn_in")) read_key(j, "gibbs_burn_in", c.gibbs_burn_in);
  if (j.contains("gibbs_thinning")) read_key(j, "gibbs_thinning", c.gibbs_thinning);
  if (j.contains("exact_moments")) read_key(j, "exact_moments", c.exact_moments);
  if (j.contains("max_step_halvings")) read_key(j, "max_step_halvings", c.max_step_halvings);
  if (j.contains("max_step_norm")) read_key(j, "max_step_norm", c.max_step_norm);
  c.validate();
}

Json to_json(const GAConfig& c) {
  Json j;
  j["population"] = c.population;
  j["generations"] = c.generations;
  j["mutation_sigma_initial"] = c.mutation_sigma_initial;
  j["sigma_decay"] = c.sigma_decay;
  j["tournament"] = c.tournament;
  j["sequences_per_candidate"] = c.sequences_per_candidate;
  j["seed"] = c.seed;
  return j;
}

void apply_json(GAConfig& c, const Json& j) {
  reject_unknown(j,
                 {"population", "generations", "mutation_sigma_initial", "sigma_decay", "tournament",
                  "sequences_per_candidate", "seed"},
                 "GA config");
  if (j.contains("population")) read_key(j, "population", c.population);
  if (j.contains("generations")) read_key(j, "generations", c.generations);
  if (j.contains("mutation_sigma_initial")) read_key(j, "mutation_sigma_initial", c.mutation_sigma_initial);
  if (j.contains("sigma_decay")) read_key(j, "sigma_decay", c.sigma_decay);
  if (j.contains("tournament")) read_key(j, "tournament", c.tournament);
  if (j.contains("sequences_per_candidate")) read_key(j, "sequences_per_candidate", c.sequences_per_candidate);
  if (j.contains("seed")) read_key(j, "seed", c.seed);
  c.validate();
}

Json to_json(const FitResult& fit, const StatisticSet& stats) {
  Json j;
  j["method"] = fit.method;
  j["statistics"] = stats.names();
  j["theta_hat"] = named(fit.theta_hat, stats);
  j["log_likelihood"] = number(fit.log_likelihood);
  j["gradient_norm"] = number(fit.gradient_norm);
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["regularized"] = fit.regularized;
  j["diagnostics"] = fit.diagnostics;
  Json trace = Json::array();
  for (const auto& r : fit.trace) {
    Json t;
    t["theta"] = numbers(r.theta);
    t["step_size"] = r.step_size;
    t["distance"] = r.distance;
    t["samples"] = r.samples;
    t["log_likelihood"] = number(r.log_likelihood);
    t["regularized"] = r.regularized;
    trace.push_back(std::move(t));
  }
  j["trace"] = std::move(trace);
  return j;
}

Json to_json(const TestResult& r, const StatisticSet& null_stats, const StatisticSet& alt_stats) {
  Json j;
  j["lr_statistic"] = number(r.lr_statistic);
  j["log_lr"] = number(r.log_lr);
  j["p_value"] = r.p_value;
  j["null_fit"] = to_json(r.null_fit, null_stats);
  j["alt_fit"] = to_json(r.alt_fit, alt_stats);
  j["ga_trace"] = numbers(r.ga_trace);
  j["best_null_theta"] = named(r.best.theta, null_stats);
  j["best_valid_sequences"] = r.best.valid;
  j["candidates_evaluated"] = r.candidates_evaluated;
  j["sequences_total"] = r.sequences_total;
  j["sequences_failed"] = r.sequences_failed;
  j["failure_rate_exceeded"] = r.failure_rate_exceeded;
  j["diagnostics"] = r.diagnostics;
  return j;
}

Json to_json(const ClassificationResult& r, const StatisticSet& stats, const NodeAttributeTable& labels,
             const NetworkSeries& series) {
  Json j;
  Json preds = Json::array();
  for (std::size_t u = 0; u < r.unknown_nodes.size(); ++u) {
    Json p;
    p["node"] = series.node_name(r.unknown_nodes[u]);
    p["label"] = labels.alphabet()[static_cast<std::size_t>(r.predicted_labels[u])];
    p["mode_frequency"] = r.posterior_mode_frequencies[u];
    preds.push_back(std::move(p));
  }
  j["predictions"] = std::move(preds);
  j["theta_hat"] = named(r.theta_hat, stats);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["accuracy"] = r.accuracy ? Json(*r.accuracy) : Json(nullptr);
  j["diagnostics"] = r.diagnostics;
  Json trace = Json::array();
  for (const auto& t : r.trace) trace.push_back(numbers(t));
  j["trace"] = std::move(trace);
  return j;
}

Json to_json(const RecoveryReport& report) {
  Json j;
  j["assumptions"] = report.assumptions;
  j["mean_loss_exact"] = number(report.mean_loss_exact);
  j["mean_loss_sampled"] = number(report.mean_loss_sampled);
  j["mean_loss_sampled_vs_exact"] = number(report.mean_loss_sampled_vs_exact);
  j["all_converged"] = report.all_converged;
  Json recs = Json::array();
  for (const auto& r : report.records) {
    Json o;
    o["seed_index"] = r.index;
    o["theta_true"] = numbers(r.theta_true);
    o["theta_exact"] = numbers(r.theta_exact);
    o["theta_sampled"] = numbers(r.theta_sampled);
    o["loss_exact"] = number(r.loss_exact);
    o["loss_sampled"] = number(r.loss_sampled);
    o["loss_sampled_vs_exact"] = number(r.loss_sampled_vs_exact);
    o["iterations_exact"] = r.iterations_exact;
    o["iterations_sampled"] = r.iterations_sampled;
    o["converged_exact"] = r.converged_exact;
    o["converged_sampled"] = r.converged_sampled;
    o["initial_edges"] = r.initial_edges;
    o["diagnostics"] = r.diagnostics;
    recs.push_back(std::move(o));
  }
  j["records"] = std::move(recs);
  return j;
}

Json to_json(const FitAssessment& a) {
  Json j;
  j["coverage"] = a.coverage();
  j["fits"] = a.fits;
  Json folds = Json::array();
  for (const auto& f : a.folds) {
    Json o;
    o["t"] = f.t;
    o["valid"] = f.valid;
    o["theta_hat"] = numbers(f.theta_hat);
    o["diagnostics"] = f.diagnostics;
    folds.push_back(std::move(o));
  }
  j["folds"] = std::move(folds);
  Json cells = Json::array();
  for (const auto& c : a.cells) {
    Json o;
    o["t"] = c.t;
    o["statistic"] = c.statistic;
    o["observed"] = number(c.observed);
    o["p5"] = number(c.p5);
    o["p95"] = number(c.p95);
    o["inside"] = c.inside;
    cells.push_back(std::move(o));
  }
  j["cells"] = std::move(cells);
  return j;
}

Json to_json(const DegeneracyReport& r) {
  Json j;
  j["beta"] = r.beta;
  j["beta_per_statistic"] = numbers(r.beta_per_statistic);
  j["instance_beta"] = r.instance_beta;
  j["p_bound"] = r.p_bound;
  j["expected_edges_lo"] = r.expected_edges_lo;
  j["expected_edges_hi"] = r.expected_edges_hi;
  j["entropy_lower_bound"] = r.entropy_lower_bound;
  return j;
}

std::string recovery_csv(const RecoveryReport& report) {
  std::ostringstream s;
  s << "seed_index,loss_exact,loss_sampled,loss_sampled_vs_exact,iterations_exact,iterations_sampled,"
       "converged_exact,converged_sampled\n";
  for (const auto& r : report.records) {
    s << r.index << ',' << fmt(r.loss_exact) << ',' << fmt(r.loss_sampled) << ',' << fmt(r.loss_sampled_vs_exact)
      << ',' << r.iterations_exact << ',' << r.iterations_sampled << ',' << r.converged_exact << ','
      << r.converged_sampled << '\n';
  }
  return s.str();
}

std::string assessment_csv(const FitAssessment& a) {
  std::ostringstream s;
  s << "t,statistic,observed,p5,p95,inside\n";
  for (const auto& c : a.cells)
    s << c.t << ',' << c.statistic << ',' << fmt(c.observed) << ',' << fmt(c.p5) << ',' << fmt(c.p95) << ','
      << (c.inside ? 1 : 0) << '\n';
  return s.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw NumericalError("SHA-256 initialisation failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

RunManifest::RunManifest(std::string command, std::uint64_t seed)
    : command_(std::move(command)), seed_(seed), start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const std::string& path) { inputs_[path] = sha256_file(path); }

Json RunManifest::to_json() const {
  Json j;
  j["command"] = command_;
  j["tool_version"] = kVersion;
  j["seed"] = seed_;
  j["config"] = config_;
  Json inputs = Json::object();
  for (const auto& [path, digest] : inputs_) inputs[path] = "sha256:" + digest;
  j["inputs"] = std::move(inputs);
  j["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return j;
}

}  // namespace tergm
