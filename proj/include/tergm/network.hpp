#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tergm {

/// Binary directed relation among n actors at one time step. The diagonal is
/// always zero; attempting to set a self-loop throws DataError.
class Network {
 public:
  Network() = default;
  explicit Network(std::size_t n);

  /// Builds from a dense 0/1 matrix. Rejects non-square input, entries other
  /// than 0/1 and nonzero diagonals.
  static Network from_rows(const std::vector<std::vector<int>>& rows);
  static Network complete(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  bool operator()(std::size_t i, std::size_t j) const noexcept { return adj_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool value);
  void toggle(std::size_t i, std::size_t j) { set(i, j, !(*this)(i, j)); }

  std::size_t out_degree(std::size_t i) const;
  std::size_t in_degree(std::size_t j) const;

  /// Row-major 0/1 storage, n*n bytes.
  const std::vector<std::uint8_t>& data() const noexcept { return adj_; }

  std::vector<std::vector<int>> rows() const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// Sum of all entries.
std::size_t edge_count(const Network& a);

/// Per-node categorical labels with an observed mask.
class NodeAttributeTable {
 public:
  NodeAttributeTable() = default;
  NodeAttributeTable(std::vector<std::string> alphabet, std::vector<int> values,
                     std::vector<bool> observed);

  /// All labels observed.
  NodeAttributeTable(std::vector<std::string> alphabet, std::vector<int> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::vector<int>& values() const noexcept { return values_; }
  const std::vector<bool>& observed() const noexcept { return observed_; }

  int value(std::size_t i) const { return values_[i]; }
  const std::string& label(std::size_t i) const { return alphabet_[static_cast<std::size_t>(values_[i])]; }
  bool is_observed(std::size_t i) const { return observed_[i]; }

  void set_value(std::size_t i, int v);
  void set_observed(std::size_t i, bool o) { observed_[i] = o; }

  /// The party indicator P_ij: 1 when i and j share a label.
  bool same_group(std::size_t i, std::size_t j) const { return values_[i] == values_[j]; }

  int label_index(const std::string& label) const;

  friend bool operator==(const NodeAttributeTable&, const NodeAttributeTable&) = default;

 private:
  void validate() const;

  std::vector<std::string> alphabet_;
  std::vector<int> values_;
  std::vector<bool> observed_;
};

/// Ordered snapshots A^1..A^T over a fixed population.
class NetworkSeries {
 public:
  NetworkSeries() = default;
  explicit NetworkSeries(std::vector<Network> networks,
                         std::optional<NodeAttributeTable> attributes = std::nullopt,
                         std::vector<std::string> node_names = {});

  std::size_t n() const noexcept { return networks_.empty() ? 0 : networks_.front().size(); }
  std::size_t length() const noexcept { return networks_.size(); }

  const Network& operator[](std::size_t t) const { return networks_[t]; }
  const std::vector<Network>& networks() const noexcept { return networks_; }

  const std::optional<NodeAttributeTable>& attributes() const noexcept { return attributes_; }
  void set_attributes(std::optional<NodeAttributeTable> attrs);

  /// Stable names for node indices; empty means "use the index".
  const std::vector<std::string>& node_names() const noexcept { return node_names_; }
  std::string node_name(std::size_t i) const;

  /// Copy without the first `count` snapshots.
  NetworkSeries drop_prefix(std::size_t count) const;

  friend bool operator==(const NetworkSeries&, const NetworkSeries&) = default;

 private:
  std::vector<Network> networks_;
  std::optional<NodeAttributeTable> attributes_;
  std::vector<std::string> node_names_;
};

/// Throws DataError unless the series has at least two snapshots.
void require_transitions(const NetworkSeries& series);

/// One proposal: the sponsor and its cosponsors.
struct SponsorshipEvent {
  std::string proposal_id;
  std::size_t sponsor = 0;
  std::vector<std::size_t> cosponsors;
};

}  // namespace tergm
