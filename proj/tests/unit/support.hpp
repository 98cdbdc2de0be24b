#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "benfordscan/ingest.hpp"

namespace test_support {

inline std::string fixture(const std::string& name) { return std::string(BENFORDSCAN_FIXTURE_DIR) + "/" + name; }

inline std::string address(char c) { return "0x" + std::string(40, c); }

inline std::string hash_of(std::uint64_t i) {
  static constexpr char hex[] = "0123456789abcdef";
  std::string h(64, '0');
  for (int k = 63; k >= 0 && i; --k, i >>= 4) h[static_cast<std::size_t>(k)] = hex[i & 0xf];
  return "0x" + h;
}

inline benfordscan::TransactionRecord record(std::uint64_t id, const std::string& from, std::optional<std::string> to,
                                             const std::string& value, std::uint64_t gas = 21000,
                                             std::uint64_t block = 0) {
  benfordscan::TransactionRecord r;
  r.tx_hash = hash_of(id);
  r.from_addr = from;
  r.to_addr = std::move(to);
  r.value = benfordscan::WeiAmount::parse(value);
  r.gas_limit = gas;
  r.timestamp = 1'600'000'000 + static_cast<std::int64_t>(id);
  r.block_number = block ? block : 1000 + id;
  return r;
}

}  // namespace test_support
