#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tergm/cli.hpp"
#include "tergm/ingest.hpp"

using namespace tergm;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tergm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path dir() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / "tergm_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string path(const std::string& name) { return (dir() / name).string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"estimate", "--bogus"}).code == 1);
  CHECK(run({"simulate", "--n", "5", "--T", "3", "--stats", "D,Q", "--theta", "0,0", "--out", path("x.json"), "--seed", "1"}).code == 1);
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("simulate then estimate") {
  const auto series = path("sim.json");
  auto r = run({"simulate", "--n", "30", "--T", "8", "--stats", "D,S,R,T", "--theta=-12,8,2,1", "--seed", "3",
                "--init", "self-ergm:50", "--out", series});
  REQUIRE(r.code == 0);
  CHECK(load_series(series, SeriesFormat::dense_json).length() == 8);

  const auto fit = path("fit.json");
  r = run({"estimate", "--series", series, "--stats", "D,S,R,T", "--method", "exact", "--out", fit});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(read_file(fit));
  CHECK(j["converged"] == true);
  CHECK(j["manifest"]["command"] == "estimate");
  CHECK(j["manifest"]["inputs"].size() == 1);
  CHECK(j["manifest"]["inputs"].begin().value().get<std::string>().rfind("sha256:", 0) == 0);

  // Same seed, same bytes.
  const auto again = path("sim2.json");
  run({"simulate", "--n", "30", "--T", "8", "--stats", "D,S,R,T", "--theta=-12,8,2,1", "--seed", "3", "--init",
       "self-ergm:50", "--out", again});
  CHECK(load_series(again, SeriesFormat::dense_json) == load_series(series, SeriesFormat::dense_json));
}

TEST_CASE("missing seed is generated and printed") {
  const auto r = run({"simulate", "--n", "5", "--T", "2", "--stats", "D", "--theta", "0", "--init", "bernoulli:0.5",
                      "--out", path("s.json")});
  CHECK(r.code == 0);
  CHECK(r.err.rfind("seed: ", 0) == 0);
}

TEST_CASE("data errors exit 2 and leave no output") {
  const auto bad = path("bad.csv");
  {
    std::ofstream f(bad);
    f << "t,src,dst\n1,0,1\n1,2,2\n";
  }
  const auto out = path("never.json");
  const auto r = run({"ingest", "--edges", bad, "--out", out});
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(out));
  const auto err = nlohmann::json::parse(r.err);
  CHECK(err["error"] == "data");
}

TEST_CASE("nonexistent MLE exits 3 with diagnostics") {
  const auto series = path("frozen.json");
  {
    std::ofstream f(series);
    f << R"({"n": 3, "networks": [[[0,1,0],[0,0,1],[0,0,0]], [[0,1,0],[0,0,1],[0,0,0]], [[0,1,0],[0,0,1],[0,0,0]]]})";
  }
  const auto out = path("frozen_fit.json");
  const auto r = run({"estimate", "--series", series, "--stats", "D,S", "--out", out});
  CHECK(r.code == 3);
  CHECK_FALSE(fs::exists(out));
  CHECK(r.err.find("mle_nonexistent") != std::string::npos);
}

TEST_CASE("ingest an event log") {
  const auto log = path("events.csv");
  {
    std::ofstream f(log);
    f << "proposal_id,sponsor,cosponsor\n";
    for (int e = 0; e < 490; ++e) f << "p" << e << ",s" << e % 7 << ",s" << (e + 1) % 7 << "\n";
  }
  const auto out = path("events.json");
  REQUIRE(run({"ingest", "--events", log, "--window", "100", "--step", "30", "--out", out}).code == 0);
  const auto series = load_series(out, SeriesFormat::dense_json);
  CHECK(series.length() == 14);
  CHECK(series.n() == 7);
}

TEST_CASE("entropy grid CSV") {
  const auto out = path("entropy.csv");
  REQUIRE(run({"entropy", "--stats", "D,S", "--theta-grid", "D=-2:2:3,S=-2:2:3", "--n", "5", "--init", "bernoulli:0.25",
               "--out", out}).code == 0);
  std::istringstream csv(read_file(out));
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  CHECK(line.rfind("theta_D,theta_S,entropy", 0) == 0);
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 9);
}

TEST_CASE("model spec file") {
  const auto spec = path("model.json");
  {
    std::ofstream f(spec);
    f << R"({"statistics": ["D", "S"], "theta": [-2, 4]})";
  }
  const auto out = path("spec_sim.json");
  CHECK(run({"simulate", "--n", "6", "--T", "3", "--stats", spec, "--seed", "1", "--init", "bernoulli:0.3", "--out", out}).code == 0);
  CHECK(load_series(out, SeriesFormat::dense_json).length() == 3);
}

}
