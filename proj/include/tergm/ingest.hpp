#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tergm/network.hpp"

namespace tergm {

/// Builds overlapping snapshots from an ordered event log. Snapshot s (0-based)
/// covers events [s*step, s*step + window); A_ij = 1 iff some event in the
/// window has sponsor j and i among its cosponsors.
NetworkSeries build_sliding_windows(const std::vector<SponsorshipEvent>& events, std::size_t window,
                                    std::size_t step, std::size_t n);

/// Number of snapshots build_sliding_windows produces.
std::size_t snapshot_count(std::size_t events, std::size_t window, std::size_t step);

enum class SeriesFormat { edge_list, event_log, dense_json };

SeriesFormat parse_series_format(const std::string& name);

struct LoadOptions {
  std::optional<std::size_t> n;       // override node count (edge-list, event-log)
  std::optional<std::size_t> length;  // override T (edge-list)
  std::size_t window = 100;           // event-log only
  std::size_t step = 30;              // event-log only
};

/// Parsed event log plus the stable name -> index mapping it induced.
struct EventLog {
  std::vector<SponsorshipEvent> events;
  std::vector<std::string> node_names;
  std::size_t n = 0;
};

EventLog parse_event_log(const std::string& text, const std::string& source = "<event-log>",
                         std::optional<std::size_t> n = std::nullopt);
NetworkSeries parse_edge_list(const std::string& text, const std::string& source = "<edge-list>",
                              const LoadOptions& options = {});
NetworkSeries parse_dense_json(const std::string& text, const std::string& source = "<dense-json>");
std::string to_dense_json(const NetworkSeries& series);

NetworkSeries load_series(const std::string& path, SeriesFormat format, const LoadOptions& options = {});
void save_series(const NetworkSeries& series, const std::string& path);

/// Label table in the dense-json "labels" schema: {"alphabet", "values", "observed"}.
NodeAttributeTable parse_labels_json(const std::string& text, std::size_t n,
                                     const std::string& source = "<labels>");
NodeAttributeTable load_labels(const std::string& path, std::size_t n);

std::string read_file(const std::string& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace tergm
