#include "tergm/cli.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "tergm/degeneracy.hpp"
#include "tergm/error.hpp"
#include "tergm/estimator.hpp"
#include "tergm/evaluation.hpp"
#include "tergm/inference.hpp"
#include "tergm/ingest.hpp"
#include "tergm/parallel.hpp"
#include "tergm/report.hpp"
#include "tergm/sampler.hpp"

namespace tergm {

namespace {

struct SeriesInput {
  std::string path;
  std::string format = "dense-json";
  std::size_t window = 100, step = 30;
  std::string labels;

  void add(CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--series", path, "input series file");
    if (required) opt->required();
    cmd->add_option("--format", format, "series format: dense-json, edge-list or event-log")
        ->check(CLI::IsMember({"dense-json", "edge-list", "event-log"}));
    cmd->add_option("--window", window, "event-log window size");
    cmd->add_option("--step", step, "event-log window step");
    cmd->add_option("--labels", labels, "node labels JSON (alphabet, values, observed)");
  }

  NetworkSeries load(RunManifest& manifest) const {
    LoadOptions opts;
    opts.window = window;
    opts.step = step;
    manifest.add_input(path);
    auto series = load_series(path, parse_series_format(format), opts);
    if (!labels.empty()) {
      manifest.add_input(labels);
      series.set_attributes(load_labels(labels, series.n()));
    }
    return series;
  }
};

// --stats takes either a comma-separated list or a model-spec JSON file
// {"statistics": [...], "theta": [...]} whose theta is optional.
struct ModelSpec {
  StatisticSet stats;
  std::optional<std::vector<double>> theta;
};

ModelSpec parse_model(const std::string& arg, RunManifest& manifest) {
  if (arg.size() < 5 || arg.substr(arg.size() - 5) != ".json") return {StatisticSet::parse(arg), std::nullopt};
  manifest.add_input(arg);
  Json doc;
  try {
    doc = Json::parse(read_file(arg));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(arg, 0, e.what());
  }
  if (!doc.is_object() || !doc.contains("statistics") || !doc["statistics"].is_array()) {
    throw ParseError(arg, 0, "model spec needs a 'statistics' array");
  }
  ModelSpec spec;
  try {
    spec.stats = StatisticSet::from_names(doc["statistics"].get<std::vector<std::string>>());
    if (doc.contains("theta") && !doc["theta"].is_null()) spec.theta = doc["theta"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(arg, 0, e.what());
  }
  if (spec.theta && spec.theta->size() != spec.stats.size()) throw ParseError(arg, 0, "theta length mismatch");
  return spec;
}

std::vector<double> parse_theta(const std::string& text, std::size_t k) {
  std::vector<double> theta;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      theta.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("cannot parse theta entry '" + tok + "'");
    }
  }
  if (theta.size() != k) {
    throw UsageError("theta has " + std::to_string(theta.size()) + " entries for " + std::to_string(k) + " statistics");
  }
  return theta;
}

Json read_json_arg(const std::string& arg, RunManifest& manifest) {
  if (arg.empty()) return Json::object();
  std::string text = arg;
  if (!arg.empty() && arg.front() != '{') {
    manifest.add_input(arg);
    text = read_file(arg);
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("invalid JSON config: ") + e.what());
  }
}

struct SeedOption {
  std::optional<std::uint64_t> value;
  void add(CLI::App* cmd) { cmd->add_option("--seed", value, "RNG seed (generated and printed when absent)"); }
  std::uint64_t resolve(std::ostream& err) const {
    if (value) return *value;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "seed: " << s << '\n';
    return s;
  }
};

void emit(const Json& report, const std::string& path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty() || path == "-") out << text;
  else write_file_atomic(path, text);
}

int exit_code(Error::Category c) {
  switch (c) {
    case Error::Category::usage: return 1;
    case Error::Category::data: return 2;
    case Error::Category::numerical: return 3;
  }
  return 3;
}

const char* category_name(Error::Category c) {
  switch (c) {
    case Error::Category::usage: return "usage";
    case Error::Category::data: return "data";
    case Error::Category::numerical: return "numerical";
  }
  return "numerical";
}

// Numerical failure that still carries a structured report for stderr.
struct ReportedFailure : NumericalError {
  Json detail;
  ReportedFailure(const std::string& what, Json d) : NumericalError(what), detail(std::move(d)) {}
};

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal exponential random graph models: simulation, estimation and diagnostics", "tergm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::optional<std::size_t> threads;
  app.add_option("--threads", threads, "worker threads (default: TERGM_THREADS or all cores)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "build a network series from an event log or edge list");
  std::string ingest_events, ingest_edges, ingest_labels, ingest_out;
  std::size_t ingest_window = 100, ingest_step = 30;
  std::optional<std::size_t> ingest_n, ingest_T;
  auto* ev_opt = ingest->add_option("--events", ingest_events, "event log CSV: proposal_id,sponsor,cosponsor");
  auto* ed_opt = ingest->add_option("--edges", ingest_edges, "edge list CSV: t,src,dst");
  ev_opt->excludes(ed_opt);
  ingest->add_option("--window", ingest_window, "events per snapshot");
  ingest->add_option("--step", ingest_step, "events between snapshot starts");
  ingest->add_option("--n", ingest_n, "node count override");
  ingest->add_option("--T", ingest_T, "snapshot count override (edge list)");
  ingest->add_option("--labels", ingest_labels, "node labels JSON to attach");
  ingest->add_option("--out", ingest_out, "output series (dense JSON)")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "simulate a series from a transition model");
  std::size_t sim_n = 0, sim_T = 0, sim_burn = 10;
  std::string sim_stats, sim_theta, sim_init = "self-ergm", sim_initial, sim_labels, sim_out;
  SeedOption sim_seed;
  simulate->add_option("--n", sim_n, "node count");
  simulate->add_option("--T", sim_T, "series length (networks)")->required();
  simulate->add_option("--stats", sim_stats, "statistics (e.g. D,S,R,T) or a model-spec JSON file")->required();
  simulate->add_option("--theta", sim_theta, "comma-separated parameters in statistic order");
  simulate->add_option("--init", sim_init, "initial law: bernoulli:q or self-ergm[:sweeps]");
  simulate->add_option("--initial", sim_initial, "series file whose first network is A^1");
  simulate->add_option("--labels", sim_labels, "node labels JSON");
  simulate->add_option("--burn-in", sim_burn, "Gibbs burn-in sweeps (general models)");
  simulate->add_option("--out", sim_out, "output series (dense JSON)")->required();
  sim_seed.add(simulate);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "maximum-likelihood fit");
  SeriesInput est_in;
  std::string est_stats, est_method = "exact", est_config, est_out;
  SeedOption est_seed;
  est_in.add(estimate);
  estimate->add_option("--stats", est_stats, "statistics (e.g. D,S,R,T) or a model-spec JSON file")->required();
  estimate->add_option("--method", est_method, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  estimate->add_option("--config", est_config, "fit config JSON (inline or file)");
  estimate->add_option("--out", est_out, "fit report (JSON); stdout when absent");
  est_seed.add(estimate);

  // entropy
  auto* entropy = app.add_subcommand("entropy", "entropy of A^2 and analytic edge-count bounds over a parameter grid");
  std::string ent_stats = "D,S", ent_grid, ent_theta, ent_init = "bernoulli:0.5", ent_method = "auto", ent_out;
  std::size_t ent_n = 0;
  entropy->add_option("--stats", ent_stats, "statistics");
  entropy->add_option("--theta-grid", ent_grid, "per-statistic grid, e.g. D=-10:10:41,S=-10:10:41")->required();
  entropy->add_option("--theta", ent_theta, "base parameters for statistics off the grid");
  entropy->add_option("--n", ent_n, "node count")->required();
  entropy->add_option("--init", ent_init, "initial law bernoulli:q");
  entropy->add_option("--method", ent_method, "auto, edgecount or bruteforce")
      ->check(CLI::IsMember({"auto", "edgecount", "bruteforce"}));
  entropy->add_option("--out", ent_out, "CSV output; stdout when absent");

  // test
  auto* test = app.add_subcommand("test", "likelihood-ratio test with a GA-approximated p-value");
  SeriesInput test_in;
  std::string test_null, test_alt, test_ga, test_fit, test_out;
  SeedOption test_seed;
  test_in.add(test);
  test->add_option("--null-stats", test_null, "null model statistics")->required();
  test->add_option("--alt-stats", test_alt, "alternative model statistics")->required();
  test->add_option("--ga-config", test_ga, "GA config JSON (inline or file)");
  test->add_option("--fit-config", test_fit, "fit config JSON (inline or file)");
  test->add_option("--out", test_out, "test report (JSON)");
  test_seed.add(test);

  // classify
  auto* classify = app.add_subcommand("classify", "infer unknown node labels (MCGEM)");
  SeriesInput cls_in;
  std::string cls_stats, cls_truth, cls_prior, cls_config, cls_out;
  std::size_t cls_burn = 20, cls_samples = 50, cls_final = 200;
  SeedOption cls_seed;
  cls_in.add(classify);
  classify->add_option("--stats", cls_stats, "statistics, e.g. S,WD,BD,WR,BR")->required();
  classify->add_option("--truth", cls_truth, "full labels JSON for scoring");
  classify->add_option("--prior", cls_prior, "label prior, comma-separated, alphabet order");
  classify->add_option("--config", cls_config, "fit config JSON (inline or file)");
  classify->add_option("--burn-in", cls_burn, "label Gibbs sweeps before each E-step");
  classify->add_option("--samples", cls_samples, "label samples per E-step");
  classify->add_option("--final-samples", cls_final, "posterior draws for the modes");
  classify->add_option("--out", cls_out, "classification report (JSON)");
  cls_seed.add(classify);

  // assess
  auto* assess = app.add_subcommand("assess", "leave-one-transition-out fit assessment");
  SeriesInput as_in;
  std::string as_stats, as_config, as_out, as_csv;
  std::size_t as_samples = 500, as_drop = 0;
  SeedOption as_seed;
  as_in.add(assess);
  assess->add_option("--stats", as_stats, "statistics")->required();
  assess->add_option("--samples", as_samples, "draws per held-out transition");
  assess->add_option("--drop-prefix", as_drop, "drop this many leading snapshots");
  assess->add_option("--config", as_config, "fit config JSON (inline or file)");
  assess->add_option("--out", as_out, "assessment report (JSON)");
  assess->add_option("--csv", as_csv, "assessment table (CSV)");
  as_seed.add(assess);

  // recover
  auto* recover = app.add_subcommand("recover", "parameter-recovery experiment on simulated data");
  RecoveryConfig rc;
  std::string rc_out, rc_csv;
  SeedOption rc_seed;
  recover->add_option("--n", rc.n, "node count");
  recover->add_option("--T", rc.T, "series length (networks)");
  recover->add_option("--seeds", rc.seeds, "number of replications");
  recover->add_option("--initial-burn-in", rc.initial_burn_in, "Gibbs sweeps for A^1");
  recover->add_option("--out", rc_out, "recovery report (JSON)");
  recover->add_option("--csv", rc_csv, "per-seed table (CSV)");
  rc_seed.add(recover);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 1;
  }

  try {
    if (threads) set_thread_count(*threads);

    if (*ingest) {
      RunManifest manifest("ingest", 0);
      NetworkSeries series;
      Json extra;
      if (!ingest_events.empty()) {
        manifest.add_input(ingest_events);
        const auto log = parse_event_log(read_file(ingest_events), ingest_events, ingest_n);
        auto windows = build_sliding_windows(log.events, ingest_window, ingest_step, log.n);
        series = NetworkSeries(windows.networks(), std::nullopt, log.node_names);
        extra["events"] = log.events.size();
      } else if (!ingest_edges.empty()) {
        manifest.add_input(ingest_edges);
        LoadOptions opts;
        opts.n = ingest_n;
        opts.length = ingest_T;
        series = parse_edge_list(read_file(ingest_edges), ingest_edges, opts);
      } else {
        throw UsageError("ingest needs --events or --edges");
      }
      if (!ingest_labels.empty()) {
        manifest.add_input(ingest_labels);
        series.set_attributes(load_labels(ingest_labels, series.n()));
      }
      manifest.set_config({{"window", ingest_window}, {"step", ingest_step}});
      Json doc = Json::parse(to_dense_json(series));
      doc["manifest"] = manifest.to_json();
      write_file_atomic(ingest_out, doc.dump() + "\n");
      extra["snapshots"] = series.length();
      extra["n"] = series.n();
      out << extra.dump() << '\n';
      return 0;
    }

    if (*simulate) {
      const std::uint64_t seed = sim_seed.resolve(err);
      RunManifest manifest("simulate", seed);
      const auto model_spec = parse_model(sim_stats, manifest);
      const auto& stats = model_spec.stats;
      if (sim_theta.empty() && !model_spec.theta) throw UsageError("simulate needs --theta or a model spec with theta");
      const auto theta = sim_theta.empty() ? *model_spec.theta : parse_theta(sim_theta, stats.size());
      std::optional<NetworkSeries> given;
      if (!sim_initial.empty()) {
        manifest.add_input(sim_initial);
        given = load_series(sim_initial, SeriesFormat::dense_json);
        if (sim_n == 0) sim_n = given->n();
      }
      if (sim_n < 2) throw UsageError("simulate needs --n >= 2 or an --initial series");
      std::optional<NodeAttributeTable> attrs;
      if (!sim_labels.empty()) {
        manifest.add_input(sim_labels);
        attrs = load_labels(sim_labels, sim_n);
      } else if (given && given->attributes()) {
        attrs = given->attributes();
      }
      SamplerConfig sc;
      sc.seed = seed;
      sc.burn_in = sim_burn;
      Network initial;
      if (given) {
        if (given->n() != sim_n) throw DataError("--initial network size does not match --n");
        initial = (*given)[0];
      } else if (sim_init.rfind("bernoulli:", 0) == 0) {
        initial = sample_initial(stats, theta, sim_n, sc, BernoulliInit{std::stod(sim_init.substr(10))},
                                 attrs ? &*attrs : nullptr);
      } else if (sim_init.rfind("self-ergm", 0) == 0) {
        SelfErgmInit mode;
        if (sim_init.size() > 10) mode.burn_in_sweeps = std::stoul(sim_init.substr(10));
        initial = sample_initial(stats, theta, sim_n, sc, mode, attrs ? &*attrs : nullptr);
        const auto edges = edge_count(initial);
        if (edges == 0 || edges == sim_n * (sim_n - 1)) {
          err << "warning: the initial network is " << (edges == 0 ? "empty" : "complete")
              << "; the static model may be degenerate at this theta\n";
        }
      } else {
        throw UsageError("unknown --init '" + sim_init + "'");
      }
      TransitionModel model(stats, theta, attrs);
      const auto series = simulate_chain(model, initial, sim_T, sc);
      manifest.set_config({{"n", sim_n}, {"T", sim_T}, {"stats", stats.names()}, {"theta", theta},
                           {"init", given ? "file" : sim_init}, {"burn_in", sim_burn}});
      Json doc = Json::parse(to_dense_json(series));
      doc["manifest"] = manifest.to_json();
      write_file_atomic(sim_out, doc.dump() + "\n");
      return 0;
    }

    if (*estimate) {
      const std::uint64_t seed = est_method == "sampled" ? est_seed.resolve(err) : est_seed.value.value_or(0);
      RunManifest manifest("estimate", seed);
      const auto series = est_in.load(manifest);
      const auto model_spec = parse_model(est_stats, manifest);
      const auto& stats = model_spec.stats;
      FitConfig cfg;
      if (model_spec.theta) cfg.initial_theta = model_spec.theta;
      apply_json(cfg, read_json_arg(est_config, manifest));
      cfg.seed = seed;
      const auto fit = est_method == "exact" ? fit_exact(stats, series, nullptr, cfg)
                                             : fit_sampled(stats, series, nullptr, cfg);
      Json config = to_json(cfg);
      config["method"] = est_method;
      config["stats"] = stats.names();
      manifest.set_config(config);
      Json report = to_json(fit, stats);
      report["manifest"] = manifest.to_json();
      if (!fit.converged) throw ReportedFailure("fit did not converge", report);
      emit(report, est_out, out);
      return 0;
    }

    if (*entropy) {
      RunManifest manifest("entropy", 0);
      const auto stats = StatisticSet::parse(ent_stats);
      std::vector<double> base(stats.size(), 0.0);
      if (!ent_theta.empty()) base = parse_theta(ent_theta, stats.size());
      if (ent_init.rfind("bernoulli:", 0) != 0) throw UsageError("--init must be bernoulli:q");
      const double q = std::stod(ent_init.substr(10));
      // Axes: "NAME=lo:hi:count".
      struct Axis {
        std::size_t index;
        std::vector<double> values;
      };
      std::vector<Axis> axes;
      std::stringstream ss(ent_grid);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("grid axis '" + item + "' must look like NAME=lo:hi:count");
        const auto idx = stats.index_of(item.substr(0, eq));
        if (!idx) throw UsageError("grid statistic '" + item.substr(0, eq) + "' is not in --stats");
        double lo = 0, hi = 0;
        std::size_t count = 0;
        char c1 = 0, c2 = 0;
        std::istringstream spec(item.substr(eq + 1));
        if (!(spec >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1) {
          throw UsageError("grid axis '" + item + "' must look like NAME=lo:hi:count");
        }
        Axis axis{*idx, {}};
        for (std::size_t i = 0; i < count; ++i)
          axis.values.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
        axes.push_back(std::move(axis));
      }
      const bool ds_only = stats.size() == 2 && stats.index_of("D") && stats.index_of("S");
      std::string method = ent_method;
      if (method == "auto") method = ds_only ? "edgecount" : "bruteforce";
      if (method == "edgecount" && !ds_only) throw UnsupportedModelError("edge-count entropy needs exactly {D,S}");

      std::vector<std::vector<double>> points{base};
      for (const auto& axis : axes) {
        std::vector<std::vector<double>> next;
        for (const auto& p : points)
          for (double v : axis.values) {
            auto t = p;
            t[axis.index] = v;
            next.push_back(std::move(t));
          }
        points = std::move(next);
      }
      std::vector<std::string> rows(points.size());
      parallel_for(points.size(), [&](std::size_t i) {
        const auto& theta = points[i];
        std::ostringstream row;
        row << std::setprecision(12);
        for (double v : theta) row << v << ',';
        if (method == "edgecount") {
          row << entropy_edgecount(theta[*stats.index_of("D")], theta[*stats.index_of("S")], ent_n, q) << ',';
        } else {
          const auto r = entropy_bruteforce(TransitionModel(stats, theta), BernoulliLaw{q}, ent_n);
          row << r.entropy << ',' << r.expected_edges;
        }
        row << ',';
        try {
          const auto b = theorem1_bounds(stats, theta, ent_n);
          row << b.p_bound << ',' << b.entropy_lower_bound << ',' << b.expected_edges_lo << ',' << b.expected_edges_hi;
        } catch (const UsageError&) {
          row << ",,,";
        }
        rows[i] = row.str();
      });
      std::ostringstream csv;
      for (const auto& name : stats.names()) csv << "theta_" << name << ',';
      csv << "entropy,expected_edges,p_bound,entropy_lower_bound,edges_lo,edges_hi\n";
      for (const auto& r : rows) csv << r << '\n';
      if (ent_out.empty()) out << csv.str();
      else write_file_atomic(ent_out, csv.str());
      return 0;
    }

    if (*test) {
      const std::uint64_t seed = test_seed.resolve(err);
      RunManifest manifest("test", seed);
      const auto series = test_in.load(manifest);
      HypothesisSpec spec{StatisticSet::parse(test_null), StatisticSet::parse(test_alt), std::nullopt};
      GAConfig ga;
      apply_json(ga, read_json_arg(test_ga, manifest));
      ga.seed = seed;
      FitConfig fit;
      apply_json(fit, read_json_arg(test_fit, manifest));
      const auto result = likelihood_ratio_test(spec, series, ga, fit);
      manifest.set_config({{"null_stats", spec.null_stats.names()},
                           {"alt_stats", spec.alt_stats.names()},
                           {"ga", to_json(ga)},
                           {"fit", to_json(fit)}});
      Json report = to_json(result, spec.null_stats, spec.alt_stats);
      report["manifest"] = manifest.to_json();
      emit(report, test_out, out);
      return 0;
    }

    if (*classify) {
      const std::uint64_t seed = cls_seed.resolve(err);
      RunManifest manifest("classify", seed);
      const auto series = cls_in.load(manifest);
      if (!series.attributes()) throw UsageError("classify needs --labels with an observed mask");
      const auto stats = StatisticSet::parse(cls_stats);
      MCGEMConfig cfg;
      apply_json(cfg.fit, read_json_arg(cls_config, manifest));
      cfg.fit.seed = seed;
      cfg.burn_in_sweeps = cls_burn;
      cfg.samples = cls_samples;
      cfg.final_samples = cls_final;
      std::vector<double> prior;
      if (!cls_prior.empty()) prior = parse_theta(cls_prior, series.attributes()->alphabet().size());
      std::optional<NodeAttributeTable> truth;
      if (!cls_truth.empty()) {
        manifest.add_input(cls_truth);
        truth = load_labels(cls_truth, series.n());
      }
      const auto result =
          mcgem_classify(stats, series, *series.attributes(), prior, cfg, truth ? &*truth : nullptr);
      Json config = to_json(cfg.fit);
      config["stats"] = stats.names();
      config["burn_in_sweeps"] = cfg.burn_in_sweeps;
      config["samples"] = cfg.samples;
      config["final_samples"] = cfg.final_samples;
      config["prior"] = prior;
      manifest.set_config(config);
      Json report = to_json(result, stats, *series.attributes(), series);
      if (truth) report["majority_baseline"] = majority_baseline(*series.attributes(), *truth);
      report["manifest"] = manifest.to_json();
      emit(report, cls_out, out);
      return 0;
    }

    if (*assess) {
      const std::uint64_t seed = as_seed.resolve(err);
      RunManifest manifest("assess", seed);
      auto series = as_in.load(manifest);
      if (as_drop > 0) {
        if (as_drop >= series.length()) throw DataError("--drop-prefix removes the whole series");
        series = series.drop_prefix(as_drop);
      }
      const auto stats = StatisticSet::parse(as_stats);
      CrossValConfig cfg;
      apply_json(cfg.fit, read_json_arg(as_config, manifest));
      cfg.samples = as_samples;
      cfg.seed = seed;
      const auto assessment = crossval_assess(stats, series, cfg);
      Json config = to_json(cfg.fit);
      config["stats"] = stats.names();
      config["samples"] = as_samples;
      config["drop_prefix"] = as_drop;
      manifest.set_config(config);
      Json report = to_json(assessment);
      report["drop_prefix"] = as_drop;
      report["manifest"] = manifest.to_json();
      if (!as_csv.empty()) write_file_atomic(as_csv, assessment_csv(assessment));
      emit(report, as_out, out);
      return 0;
    }

    if (*recover) {
      rc.seed = rc_seed.resolve(err);
      RunManifest manifest("recover", rc.seed);
      manifest.set_config({{"n", rc.n},
                           {"T", rc.T},
                           {"seeds", rc.seeds},
                           {"initial_burn_in", rc.initial_burn_in},
                           {"exact", to_json(rc.exact)},
                           {"sampled", to_json(rc.sampled)}});
      const auto report = recovery_experiment(rc);
      Json doc = to_json(report);
      doc["manifest"] = manifest.to_json();
      if (!rc_csv.empty()) write_file_atomic(rc_csv, recovery_csv(report));
      emit(doc, rc_out, out);
      return 0;
    }
  } catch (const ReportedFailure& e) {
    Json d{{"error", "numerical"}, {"message", e.what()}, {"report", e.detail}};
    err << d.dump() << '\n';
    return 3;
  } catch (const Error& e) {
    Json d{{"error", category_name(e.category())}, {"message", e.what()}};
    err << d.dump() << '\n';
    return exit_code(e.category());
  } catch (const std::invalid_argument& e) {
    Json d{{"error", "usage"}, {"message", std::string("invalid argument: ") + e.what()}};
    err << d.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    Json d{{"error", "numerical"}, {"message", e.what()}};
    err << d.dump() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace tergm
