#include "tergm/network.hpp"

#include <algorithm>
#include <numeric>

#include "tergm/error.hpp"

namespace tergm {

Network::Network(std::size_t n) : n_(n), adj_(n * n, 0) {}

Network Network::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t n = rows.size();
  Network a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw DataError("adjacency row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                      " entries, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const int v = rows[i][j];
      if (v != 0 && v != 1) {
        throw DataError("adjacency entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not 0/1");
      }
      if (i == j && v != 0) throw DataError("self-loop at node " + std::to_string(i));
      a.adj_[i * n + j] = static_cast<std::uint8_t>(v);
    }
  }
  return a;
}

Network Network::complete(std::size_t n) {
  Network a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) a.adj_[i * n + j] = 1;
  return a;
}

void Network::set(std::size_t i, std::size_t j, bool value) {
  if (i >= n_ || j >= n_) throw DataError("node index out of range");
  if (i == j) {
    if (value) throw DataError("self-loop at node " + std::to_string(i));
    return;
  }
  adj_[i * n_ + j] = value ? 1 : 0;
}

std::size_t Network::out_degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < n_; ++j) d += adj_[i * n_ + j];
  return d;
}

std::size_t Network::in_degree(std::size_t j) const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < n_; ++i) d += adj_[i * n_ + j];
  return d;
}

std::vector<std::vector<int>> Network::rows() const {
  std::vector<std::vector<int>> out(n_, std::vector<int>(n_, 0));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = adj_[i * n_ + j];
  return out;
}

std::size_t edge_count(const Network& a) {
  return std::accumulate(a.data().begin(), a.data().end(), std::size_t{0});
}

NodeAttributeTable::NodeAttributeTable(std::vector<std::string> alphabet, std::vector<int> values,
                                       std::vector<bool> observed)
    : alphabet_(std::move(alphabet)), values_(std::move(values)), observed_(std::move(observed)) {
  validate();
}

NodeAttributeTable::NodeAttributeTable(std::vector<std::string> alphabet, std::vector<int> values)
    : alphabet_(std::move(alphabet)), values_(std::move(values)), observed_(values_.size(), true) {
  validate();
}

void NodeAttributeTable::validate() const {
  if (alphabet_.empty()) throw DataError("label alphabet is empty");
  for (std::size_t a = 0; a < alphabet_.size(); ++a)
    for (std::size_t b = a + 1; b < alphabet_.size(); ++b)
      if (alphabet_[a] == alphabet_[b]) throw DataError("duplicate label '" + alphabet_[a] + "' in alphabet");
  if (observed_.size() != values_.size()) throw DataError("observed mask length differs from label count");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0 || static_cast<std::size_t>(values_[i]) >= alphabet_.size()) {
      throw DataError("label of node " + std::to_string(i) + " is outside the alphabet");
    }
  }
}

void NodeAttributeTable::set_value(std::size_t i, int v) {
  if (v < 0 || static_cast<std::size_t>(v) >= alphabet_.size()) throw DataError("label outside the alphabet");
  values_[i] = v;
}

int NodeAttributeTable::label_index(const std::string& label) const {
  const auto it = std::find(alphabet_.begin(), alphabet_.end(), label);
  if (it == alphabet_.end()) throw DataError("label '" + label + "' not in alphabet");
  return static_cast<int>(it - alphabet_.begin());
}

NetworkSeries::NetworkSeries(std::vector<Network> networks, std::optional<NodeAttributeTable> attributes,
                             std::vector<std::string> node_names)
    : networks_(std::move(networks)), node_names_(std::move(node_names)) {
  if (networks_.empty()) throw DataError("network series is empty");
  const std::size_t n = networks_.front().size();
  for (std::size_t t = 0; t < networks_.size(); ++t) {
    if (networks_[t].size() != n) {
      throw DataError("network " + std::to_string(t + 1) + " has " + std::to_string(networks_[t].size()) +
                      " nodes, expected " + std::to_string(n));
    }
  }
  if (!node_names_.empty() && node_names_.size() != n) throw DataError("node name table does not match n");
  set_attributes(std::move(attributes));
}

void NetworkSeries::set_attributes(std::optional<NodeAttributeTable> attrs) {
  if (attrs && attrs->size() != n()) {
    throw DataError("attribute table has " + std::to_string(attrs->size()) + " rows, expected " +
                    std::to_string(n()));
  }
  attributes_ = std::move(attrs);
}

std::string NetworkSeries::node_name(std::size_t i) const {
  return node_names_.empty() ? std::to_string(i) : node_names_[i];
}

NetworkSeries NetworkSeries::drop_prefix(std::size_t count) const {
  if (count >= networks_.size()) throw DataError("cannot drop every snapshot of the series");
  std::vector<Network> rest(networks_.begin() + static_cast<std::ptrdiff_t>(count), networks_.end());
  return NetworkSeries(std::move(rest), attributes_, node_names_);
}

void require_transitions(const NetworkSeries& series) {
  if (series.length() < 2) throw DataError("at least two snapshots (one transition) are required");
}

}  // namespace tergm
