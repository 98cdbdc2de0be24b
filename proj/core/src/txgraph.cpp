#include "benfordscan/txgraph.hpp"

#include <algorithm>
#include <ostream>

namespace benfordscan {

TransactionGraph::TransactionGraph(std::vector<TransactionRecord> records) : edges_(std::move(records)) {
  std::sort(edges_.begin(), edges_.end(), block_order);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& r = edges_[i];
    vertices_.insert(r.from_addr);
    outgoing_[r.from_addr].push_back(i);
    if (r.to_addr) {
      vertices_.insert(*r.to_addr);
      incoming_[*r.to_addr].push_back(i);
    }
  }
}

std::size_t TransactionGraph::multiplicity(const std::string& from, const std::string& to) const {
  const auto it = outgoing_.find(from);
  if (it == outgoing_.end()) return 0;
  return static_cast<std::size_t>(std::count_if(it->second.begin(), it->second.end(), [&](std::size_t i) {
    return edges_[i].to_addr && *edges_[i].to_addr == to;
  }));
}

AddressNeighborhood TransactionGraph::neighborhood(const std::string& address) const {
  AddressNeighborhood n;
  n.address = address;
  if (const auto it = incoming_.find(address); it != incoming_.end()) {
    for (const auto i : it->second) n.incoming.push_back(edges_[i]);
  }
  if (const auto it = outgoing_.find(address); it != outgoing_.end()) {
    for (const auto i : it->second) n.outgoing.push_back(edges_[i]);
  }
  return n;
}

void TransactionGraph::write_edge_list(std::ostream& out) const {
  out << "from,to,value_wei,block_number\n";
  for (const auto& r : edges_) {
    out << r.from_addr << ',' << r.to_addr.value_or("") << ',' << r.value.str() << ',' << r.block_number << '\n';
  }
}

std::size_t unique_counterparties(const AddressNeighborhood& neighborhood, Direction direction) {
  std::set<std::string> seen;
  if (direction == Direction::in) {
    for (const auto& r : neighborhood.incoming) seen.insert(r.from_addr);
  } else {
    for (const auto& r : neighborhood.outgoing) {
      if (r.to_addr) seen.insert(*r.to_addr);
    }
  }
  return seen.size();
}

}  // namespace benfordscan
