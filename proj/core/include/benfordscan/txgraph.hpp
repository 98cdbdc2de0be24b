#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "benfordscan/ingest.hpp"

namespace benfordscan {

enum class Direction { in, out };

/// One address's incident edges, each list in block order. A self-transfer
/// appears in both lists.
struct AddressNeighborhood {
  std::string address;
  std::vector<TransactionRecord> incoming;
  std::vector<TransactionRecord> outgoing;

  std::size_t edge_total() const noexcept { return incoming.size() + outgoing.size(); }
};

/// Directed multigraph over addresses; every record is one edge. Immutable
/// once built, so concurrent queries are safe.
class TransactionGraph {
 public:
  TransactionGraph() = default;
  explicit TransactionGraph(std::vector<TransactionRecord> records);

  const std::set<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<TransactionRecord>& edges() const noexcept { return edges_; }
  bool contains(const std::string& address) const { return vertices_.contains(address); }

  /// Number of parallel edges from -> to.
  std::size_t multiplicity(const std::string& from, const std::string& to) const;

  AddressNeighborhood neighborhood(const std::string& address) const;

  /// Edge list for plotting tools: from,to,value_wei,block_number.
  void write_edge_list(std::ostream& out) const;

 private:
  std::vector<TransactionRecord> edges_;  // block order
  std::set<std::string> vertices_;
  std::map<std::string, std::vector<std::size_t>> incoming_;
  std::map<std::string, std::vector<std::size_t>> outgoing_;
};

inline TransactionGraph build_graph(std::vector<TransactionRecord> records) {
  return TransactionGraph(std::move(records));
}

/// Distinct opposite endpoints in one direction. Contract creations (no
/// recipient) have no counterparty.
std::size_t unique_counterparties(const AddressNeighborhood& neighborhood, Direction direction);

}  // namespace benfordscan
