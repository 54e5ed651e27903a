#include "tergm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tergm/error.hpp"

namespace tergm {

using json = nlohmann::json;

std::size_t snapshot_count(std::size_t events, std::size_t window, std::size_t step) {
  if (window == 0 || step == 0 || window > events) return 0;
  return (events - window) / step + 1;
}

NetworkSeries build_sliding_windows(const std::vector<SponsorshipEvent>& events, std::size_t window,
                                    std::size_t step, std::size_t n) {
  if (window == 0 || step == 0) throw DataError("window and step must be positive");
  if (events.empty() || window > events.size()) {
    throw DataError("empty series: window of " + std::to_string(window) + " exceeds " +
                    std::to_string(events.size()) + " events");
  }
  for (const auto& e : events) {
    if (e.sponsor >= n) throw DataError("proposal " + e.proposal_id + ": sponsor index out of range");
    for (auto c : e.cosponsors) {
      if (c >= n) throw DataError("proposal " + e.proposal_id + ": cosponsor index out of range");
      if (c == e.sponsor) throw DataError("proposal " + e.proposal_id + ": sponsor listed as cosponsor");
    }
  }
  const std::size_t count = snapshot_count(events.size(), window, step);
  std::vector<Network> snapshots;
  snapshots.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Network a(n);
    for (std::size_t e = s * step; e < s * step + window; ++e)
      for (auto c : events[e].cosponsors) a.set(c, events[e].sponsor, true);
    snapshots.push_back(std::move(a));
  }
  return NetworkSeries(std::move(snapshots));
}

SeriesFormat parse_series_format(const std::string& name) {
  if (name == "edge-list") return SeriesFormat::edge_list;
  if (name == "event-log") return SeriesFormat::event_log;
  if (name == "dense-json") return SeriesFormat::dense_json;
  throw UsageError("unknown series format '" + name + "' (expected edge-list, event-log or dense-json)");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<std::size_t> parse_index(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct CsvRow {
  std::size_t line;
  std::vector<std::string> cells;
};

// Reads a CSV body after checking the header columns; blank lines and lines
// starting with '#' are skipped.
std::vector<CsvRow> read_csv(const std::string& text, const std::string& source,
                             const std::vector<std::string>& header) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cells = split_csv(t);
    if (!seen_header) {
      if (cells != header) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw ParseError(source, lineno, "expected header '" + expected + "'");
      }
      seen_header = true;
      continue;
    }
    if (cells.size() != header.size()) {
      throw ParseError(source, lineno, "expected " + std::to_string(header.size()) + " columns, found " +
                                           std::to_string(cells.size()));
    }
    rows.push_back({lineno, std::move(cells)});
  }
  if (!seen_header) throw ParseError(source, lineno, "missing header");
  return rows;
}

}  // namespace

EventLog parse_event_log(const std::string& text, const std::string& source, std::optional<std::size_t> n) {
  const auto rows = read_csv(text, source, {"proposal_id", "sponsor", "cosponsor"});

  // Integer tokens are used as indices directly; otherwise names are numbered
  // in order of first appearance.
  bool numeric = true;
  for (const auto& r : rows) {
    if (!parse_index(r.cells[1])) numeric = false;
    if (!r.cells[2].empty() && !parse_index(r.cells[2])) numeric = false;
  }

  EventLog log;
  std::map<std::string, std::size_t> index_of;
  auto node = [&](const std::string& token, std::size_t lineno) -> std::size_t {
    if (token.empty()) throw ParseError(source, lineno, "empty node field");
    if (numeric) {
      const std::size_t v = *parse_index(token);
      if (n && v >= *n) throw ParseError(source, lineno, "node index " + token + " out of range");
      return v;
    }
    auto [it, inserted] = index_of.emplace(token, log.node_names.size());
    if (inserted) log.node_names.push_back(token);
    return it->second;
  };

  std::map<std::string, std::size_t> event_of;
  std::size_t max_index = 0;
  for (const auto& r : rows) {
    const std::string& id = r.cells[0];
    if (id.empty()) throw ParseError(source, r.line, "empty proposal_id");
    const std::size_t sponsor = node(r.cells[1], r.line);
    max_index = std::max(max_index, sponsor);
    auto [it, inserted] = event_of.emplace(id, log.events.size());
    if (inserted) {
      log.events.push_back({id, sponsor, {}});
    } else if (log.events[it->second].sponsor != sponsor) {
      throw ParseError(source, r.line, "proposal " + id + " has more than one sponsor");
    }
    if (r.cells[2].empty()) continue;
    const std::size_t cosponsor = node(r.cells[2], r.line);
    max_index = std::max(max_index, cosponsor);
    if (cosponsor == sponsor) throw ParseError(source, r.line, "sponsor listed as its own cosponsor (self-loop)");
    auto& cos = log.events[it->second].cosponsors;
    if (std::find(cos.begin(), cos.end(), cosponsor) == cos.end()) cos.push_back(cosponsor);
  }
  if (numeric) {
    log.n = n ? *n : (rows.empty() ? 0 : max_index + 1);
  } else {
    log.n = log.node_names.size();
    if (n) {
      if (*n < log.n) throw DataError(source + ": event log names more than " + std::to_string(*n) + " nodes");
      for (std::size_t i = log.n; i < *n; ++i) log.node_names.push_back("node" + std::to_string(i));
      log.n = *n;
    }
  }
  return log;
}

NetworkSeries parse_edge_list(const std::string& text, const std::string& source, const LoadOptions& options) {
  const auto rows = read_csv(text, source, {"t", "src", "dst"});
  struct Edge {
    std::size_t t, src, dst, line;
  };
  std::vector<Edge> edges;
  std::size_t max_t = 0, max_node = 0;
  for (const auto& r : rows) {
    const auto t = parse_index(r.cells[0]);
    const auto src = parse_index(r.cells[1]);
    const auto dst = parse_index(r.cells[2]);
    if (!t || !src || !dst) throw ParseError(source, r.line, "malformed row (expected non-negative integers)");
    if (*t == 0) throw ParseError(source, r.line, "time index is 1-based");
    if (*src == *dst) throw ParseError(source, r.line, "self-loop at node " + r.cells[1]);
    if (options.n && (*src >= *options.n || *dst >= *options.n)) {
      throw ParseError(source, r.line, "node index out of range for n=" + std::to_string(*options.n));
    }
    if (options.length && *t > *options.length) throw ParseError(source, r.line, "time index exceeds T");
    max_t = std::max(max_t, *t);
    max_node = std::max({max_node, *src, *dst});
    edges.push_back({*t, *src, *dst, r.line});
  }
  const std::size_t n = options.n ? *options.n : (edges.empty() ? 0 : max_node + 1);
  const std::size_t length = options.length ? *options.length : max_t;
  if (length == 0 || n == 0) throw ParseError(source, 0, "edge list is empty; pass n and T explicitly");
  std::vector<Network> nets(length, Network(n));
  for (const auto& e : edges) nets[e.t - 1].set(e.src, e.dst, true);
  return NetworkSeries(std::move(nets));
}

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

NodeAttributeTable labels_from_json(const json& j, std::size_t n, const std::string& source) {
  if (!j.is_object() || !j.contains("alphabet") || !j.contains("values")) {
    throw ParseError(source, 0, "labels must be an object with 'alphabet' and 'values'");
  }
  std::vector<std::string> alphabet = j.at("alphabet").get<std::vector<std::string>>();
  const auto& vals = j.at("values");
  if (!vals.is_array() || vals.size() != n) {
    throw ParseError(source, 0, "labels.values must have " + std::to_string(n) + " entries");
  }
  std::vector<int> values;
  values.reserve(n);
  // null marks an unknown label; such nodes default to unobserved.
  std::vector<bool> observed(n, true);
  for (const auto& v : vals) {
    if (v.is_null()) {
      observed[values.size()] = false;
      values.push_back(0);
    } else if (v.is_string()) {
      const auto it = std::find(alphabet.begin(), alphabet.end(), v.get<std::string>());
      if (it == alphabet.end()) throw ParseError(source, 0, "label '" + v.get<std::string>() + "' not in alphabet");
      values.push_back(static_cast<int>(it - alphabet.begin()));
    } else if (v.is_number_integer()) {
      values.push_back(v.get<int>());
    } else {
      throw ParseError(source, 0, "labels.values entries must be strings, integers or null");
    }
  }
  if (j.contains("observed")) {
    const auto& obs = j.at("observed");
    if (!obs.is_array() || obs.size() != n) {
      throw ParseError(source, 0, "labels.observed must have " + std::to_string(n) + " entries");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!obs[i].is_boolean()) throw ParseError(source, 0, "labels.observed entries must be booleans");
      if (obs[i].get<bool>() && vals[i].is_null()) {
        throw ParseError(source, 0, "node " + std::to_string(i) + " is marked observed but has no label");
      }
      observed[i] = obs[i].get<bool>();
    }
  }
  return NodeAttributeTable(std::move(alphabet), std::move(values), std::move(observed));
}

json labels_to_json(const NodeAttributeTable& attrs) {
  json values = json::array();
  for (std::size_t i = 0; i < attrs.size(); ++i) values.push_back(attrs.label(i));
  json observed = json::array();
  for (std::size_t i = 0; i < attrs.size(); ++i) observed.push_back(static_cast<bool>(attrs.is_observed(i)));
  return json{{"alphabet", attrs.alphabet()}, {"values", values}, {"observed", observed}};
}

}  // namespace

NetworkSeries parse_dense_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_of_offset(text, e.byte), e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("networks")) {
      throw ParseError(source, 0, "expected an object with 'n' and 'networks'");
    }
    const auto n = doc.at("n").get<std::size_t>();
    std::vector<Network> nets;
    std::size_t t = 0;
    for (const auto& m : doc.at("networks")) {
      ++t;
      const auto rows = m.get<std::vector<std::vector<int>>>();
      if (rows.size() != n) {
        throw ParseError(source, 0, "network " + std::to_string(t) + " has " + std::to_string(rows.size()) +
                                        " rows, expected n=" + std::to_string(n));
      }
      try {
        nets.push_back(Network::from_rows(rows));
      } catch (const DataError& e) {
        throw ParseError(source, 0, "network " + std::to_string(t) + ": " + e.what());
      }
    }
    if (nets.empty()) throw ParseError(source, 0, "no networks");
    std::optional<NodeAttributeTable> attrs;
    if (doc.contains("labels") && !doc.at("labels").is_null()) attrs = labels_from_json(doc.at("labels"), n, source);
    std::vector<std::string> names;
    if (doc.contains("nodes")) names = doc.at("nodes").get<std::vector<std::string>>();
    return NetworkSeries(std::move(nets), std::move(attrs), std::move(names));
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
}

std::string to_dense_json(const NetworkSeries& series) {
  json doc;
  doc["n"] = series.n();
  json nets = json::array();
  for (const auto& a : series.networks()) nets.push_back(a.rows());
  doc["networks"] = std::move(nets);
  if (series.attributes()) doc["labels"] = labels_to_json(*series.attributes());
  if (!series.node_names().empty()) doc["nodes"] = series.node_names();
  return doc.dump() + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp + "'");
    out << content;
    if (!out.flush()) throw DataError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

NetworkSeries load_series(const std::string& path, SeriesFormat format, const LoadOptions& options) {
  const std::string text = read_file(path);
  switch (format) {
    case SeriesFormat::dense_json:
      return parse_dense_json(text, path);
    case SeriesFormat::edge_list:
      return parse_edge_list(text, path, options);
    case SeriesFormat::event_log: {
      auto log = parse_event_log(text, path, options.n);
      auto series = build_sliding_windows(log.events, options.window, options.step, log.n);
      return NetworkSeries(series.networks(), std::nullopt, std::move(log.node_names));
    }
  }
  throw UsageError("unknown series format");
}

void save_series(const NetworkSeries& series, const std::string& path) {
  write_file_atomic(path, to_dense_json(series));
}

NodeAttributeTable parse_labels_json(const std::string& text, std::size_t n, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_of_offset(text, e.byte), e.what());
  }
  try {
    return labels_from_json(doc.contains("labels") ? doc.at("labels") : doc, n, source);
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
}

NodeAttributeTable load_labels(const std::string& path, std::size_t n) {
  return parse_labels_json(read_file(path), n, path);
}

}  // namespace tergm
