#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "benfordscan/wei.hpp"

namespace benfordscan {

enum class Label : int { scam = 1, nonscam = -1 };

std::string_view to_string(Label label);
/// Accepts "scam"/"nonscam" (and "+1"/"1"/"-1"); throws std::invalid_argument.
Label parse_label(std::string_view text);

/// One on-chain transfer. Addresses and hashes are lowercase, 0x-prefixed.
struct TransactionRecord {
  std::string tx_hash;
  std::string from_addr;
  std::optional<std::string> to_addr;  // absent for contract creation
  WeiAmount value;
  std::uint64_t gas_limit = 0;
  std::int64_t timestamp = 0;
  std::uint64_t block_number = 0;
  bool internal = false;

  friend bool operator==(const TransactionRecord&, const TransactionRecord&) = default;
};

/// Canonical record order: (block_number, tx_hash).
bool block_order(const TransactionRecord& a, const TransactionRecord& b);

struct AddressLabel {
  std::string address;
  Label label = Label::nonscam;
  std::string source;

  friend bool operator==(const AddressLabel&, const AddressLabel&) = default;
};

using LabelMap = std::map<std::string, AddressLabel>;

struct LabelCounts {
  std::size_t scam = 0;
  std::size_t nonscam = 0;
};

LabelCounts count_labels(const LabelMap& labels);

enum class InputFormat { csv, jsonl };

/// Lowercases and validates a 20-byte address ("0x" + 40 hex digits).
/// Throws std::invalid_argument.
std::string normalize_address(std::string_view text);
/// Lowercases and validates a 32-byte transaction hash ("0x" + 64 hex digits).
std::string normalize_tx_hash(std::string_view text);
bool is_normalized_address(std::string_view text);

/// Column order of the transactions CSV. `internal` is optional on input and
/// always written on output.
inline constexpr std::string_view kTransactionColumns[] = {
    "tx_hash", "from_addr", "to_addr", "value_wei", "gas_limit", "timestamp", "block_number", "internal"};

/// Parses a whole stream, throwing ParseError/ValidationError on the first
/// bad row (line numbers are 1-based and count the header).
std::vector<TransactionRecord> parse_transactions(std::istream& in, InputFormat format);

struct ParseIssue {
  std::size_t line = 0;
  std::string field;
  std::string message;
};

struct LenientParse {
  std::vector<TransactionRecord> records;
  std::vector<ParseIssue> issues;  // one per skipped row
};

/// Like parse_transactions but skips bad rows (and later duplicates of an
/// already-seen hash), reporting each. A bad CSV header still throws.
LenientParse parse_transactions_lenient(std::istream& in, InputFormat format);

/// Writes records in canonical CSV form: sorted by block order, all eight
/// columns, `internal` as true/false.
void write_transactions(std::ostream& out, std::span<const TransactionRecord> records);

nlohmann::json to_json(const TransactionRecord& record);
/// Validates one JSON object; `line` is used for diagnostics.
TransactionRecord record_from_json(const nlohmann::json& object, std::size_t line);

/// Reads address,label,source rows. Agreeing duplicates merge their sources
/// (joined with ';'); disagreeing duplicates throw LabelConflictError.
LabelMap load_labels(std::istream& in);
void write_labels(std::ostream& out, const LabelMap& labels);

}  // namespace benfordscan
