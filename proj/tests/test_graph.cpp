#include <doctest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "tergm/error.hpp"
#include "tergm/ingest.hpp"
#include "tergm/network.hpp"

using namespace tergm;
namespace fs = std::filesystem;

namespace {

std::vector<SponsorshipEvent> synthetic_events(std::size_t count, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<SponsorshipEvent> events;
  for (std::size_t e = 0; e < count; ++e) {
    SponsorshipEvent ev{"p" + std::to_string(e), pick(rng), {}};
    for (int c = 0; c < 3; ++c) {
      const auto v = pick(rng);
      if (v != ev.sponsor) ev.cosponsors.push_back(v);
    }
    events.push_back(ev);
  }
  return events;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "tergm_graph_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("edge_count basics") {
  CHECK(edge_count(Network(5)) == 0);
  CHECK(edge_count(Network::complete(3)) == 6);
  Network a(3);
  a.set(0, 1, true);
  a.set(1, 2, true);
  CHECK(edge_count(a) == 2);
}

TEST_CASE("diagonal is rejected") {
  Network a(3);
  CHECK_THROWS_AS(a.set(1, 1, true), DataError);
  CHECK_THROWS_AS(Network::from_rows({{1, 0}, {0, 0}}), DataError);
  CHECK_THROWS_AS(Network::from_rows({{0, 2}, {0, 0}}), DataError);
  CHECK_THROWS_AS(Network::from_rows({{0, 1, 0}, {0, 0}}), DataError);
}

TEST_CASE("degrees") {
  auto a = Network::from_rows({{0, 1, 1}, {0, 0, 1}, {0, 0, 0}});
  CHECK(a.out_degree(0) == 2);
  CHECK(a.in_degree(2) == 2);
  CHECK(a.in_degree(0) == 0);
}

TEST_CASE("sliding windows: 490 events, window 100, step 30 give 14 snapshots") {
  CHECK(snapshot_count(490, 100, 30) == 14);
  const auto series = build_sliding_windows(synthetic_events(490, 20, 3), 100, 30, 20);
  CHECK(series.length() == 14);
  CHECK(series.n() == 20);
}

TEST_CASE("sliding windows: hand-evaluated window") {
  std::vector<SponsorshipEvent> events(3, SponsorshipEvent{"", 0, {1}});
  for (std::size_t e = 0; e < 3; ++e) events[e].proposal_id = std::to_string(e);
  const auto series = build_sliding_windows(events, 3, 1, 3);
  REQUIRE(series.length() == 1);
  CHECK(edge_count(series[0]) == 1);
  CHECK(series[0](1, 0));
}

TEST_CASE("sliding windows: each snapshot matches a direct rebuild of its window") {
  const auto events = synthetic_events(130, 8, 11);
  const auto series = build_sliding_windows(events, 40, 15, 8);
  REQUIRE(series.length() == snapshot_count(130, 40, 15));
  for (std::size_t s = 0; s < series.length(); ++s) {
    Network expect(8);
    for (std::size_t e = s * 15; e < s * 15 + 40; ++e)
      for (auto c : events[e].cosponsors) expect.set(c, events[e].sponsor, true);
    CHECK(series[s] == expect);
  }
}

TEST_CASE("sliding windows: empty input is an error") {
  CHECK_THROWS_AS(build_sliding_windows({}, 10, 5, 3), DataError);
  CHECK_THROWS_AS(build_sliding_windows(synthetic_events(5, 4, 1), 10, 5, 4), DataError);
}

TEST_CASE("event log parsing maps names in order of appearance") {
  const std::string text =
      "proposal_id,sponsor,cosponsor\n"
      "b1,Smith,Jones\n"
      "b1,Smith,Lee\n"
      "b2,Lee,Smith\n";
  const auto log = parse_event_log(text);
  CHECK(log.n == 3);
  CHECK(log.node_names == std::vector<std::string>{"Smith", "Jones", "Lee"});
  REQUIRE(log.events.size() == 2);
  CHECK(log.events[0].cosponsors == std::vector<std::size_t>{1, 2});
  CHECK(log.events[1].sponsor == 2);
}

TEST_CASE("event log: sponsor as own cosponsor reports its line") {
  const std::string text = "proposal_id,sponsor,cosponsor\nb1,0,1\nb2,2,2\n";
  try {
    parse_event_log(text, "log.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("edge list: self loop is a parse error with its line number") {
  const std::string text = "t,src,dst\n1,0,1\n1,2,2\n";
  try {
    parse_edge_list(text, "edges.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("self-loop") != std::string::npos);
  }
}

TEST_CASE("edge list builds the listed snapshots") {
  const auto s = parse_edge_list("t,src,dst\n1,0,1\n2,1,0\n2,2,0\n");
  REQUIRE(s.length() == 2);
  CHECK(s.n() == 3);
  CHECK(s[0](0, 1));
  CHECK(edge_count(s[1]) == 2);
  CHECK_THROWS_AS(parse_edge_list("t,src\n1,0\n"), ParseError);
}

TEST_CASE("dense json with two 3x3 matrices") {
  const std::string text = R"({"n": 3, "networks": [[[0,1,0],[0,0,1],[0,0,0]], [[0,0,0],[1,0,0],[0,0,0]]]})";
  const auto s = parse_dense_json(text);
  CHECK(s.length() == 2);
  CHECK(s.n() == 3);
  CHECK(s[0](1, 2));
  CHECK(s[1](1, 0));
  CHECK_THROWS_AS(parse_dense_json(R"({"n": 2, "networks": [[[1,0],[0,0]]]})"), DataError);
  CHECK_THROWS_AS(parse_dense_json("{\"n\": 2,\n \"networks\": [}"), ParseError);
}

TEST_CASE("dense json round trip with labels and names") {
  std::mt19937_64 rng(5);
  std::vector<Network> nets;
  for (int t = 0; t < 4; ++t) nets.push_back(oracle::random_network(6, 0.3, rng));
  NodeAttributeTable labels({"D", "R"}, {0, 1, 1, 0, 0, 1}, {true, false, true, true, false, true});
  NetworkSeries series(nets, labels, {"a", "b", "c", "d", "e", "f"});
  const auto path = scratch("roundtrip.json");
  save_series(series, path.string());
  const auto back = load_series(path.string(), SeriesFormat::dense_json);
  CHECK(back.networks() == series.networks());
  REQUIRE(back.attributes());
  CHECK(back.attributes()->observed() == labels.observed());
  for (std::size_t i = 0; i < 6; ++i)
    if (labels.is_observed(i)) CHECK(back.attributes()->value(i) == labels.value(i));
  CHECK(back.node_names() == series.node_names());
}

TEST_CASE("labels json") {
  const auto t = parse_labels_json(R"({"alphabet": ["D", "R"], "values": ["R", null, 0], "observed": [true, false, true]})", 3);
  CHECK(t.value(0) == 1);
  CHECK_FALSE(t.is_observed(1));
  CHECK(t.value(2) == 0);
  CHECK_THROWS_AS(parse_labels_json(R"({"alphabet": ["D"], "values": ["X", "D"]})", 2), ParseError);
  CHECK_THROWS_AS(parse_labels_json(R"({"alphabet": ["D"], "values": ["D"]})", 2), ParseError);
  CHECK_THROWS_AS(parse_labels_json(R"({"alphabet": ["D"], "values": [null], "observed": [true]})", 1), ParseError);
}

TEST_CASE("series needs a fixed population") {
  CHECK_THROWS_AS(NetworkSeries({Network(3), Network(4)}), DataError);
  CHECK_THROWS_AS(require_transitions(NetworkSeries({Network(3)})), DataError);
}

TEST_CASE("atomic write leaves no temporary behind") {
  const auto path = scratch("atomic.txt");
  write_file_atomic(path.string(), "hello");
  CHECK(read_file(path.string()) == "hello");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(path.parent_path()))
    if (e.path().filename().string().rfind("atomic.txt", 0) == 0) ++files;
  CHECK(files == 1);
}

}
