#include "benfordscan/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "benfordscan/error.hpp"
#include "csv.hpp"

namespace benfordscan {

namespace {

using nlohmann::json;

std::string normalize_hex(std::string_view text, std::size_t hex_digits, const char* what) {
  if (text.size() != hex_digits + 2 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
    throw std::invalid_argument(std::string("expected 0x-prefixed ") + what + " of " +
                                std::to_string(hex_digits) + " hex digits, got '" + std::string(text) + "'");
  }
  std::string out = "0x";
  out.reserve(hex_digits + 2);
  for (const char c : text.substr(2)) {
    if (c >= '0' && c <= '9') {
      out.push_back(c);
    } else if (c >= 'a' && c <= 'f') {
      out.push_back(c);
    } else if (c >= 'A' && c <= 'F') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      throw std::invalid_argument(std::string("non-hex character in ") + what + " '" + std::string(text) + "'");
    }
  }
  return out;
}

template <class Int>
Int parse_int(std::string_view text, std::size_t line, const char* field) {
  if (!text.empty() && text.front() == '-' && std::is_unsigned_v<Int>) {
    throw ValidationError(line, field, "negative value '" + std::string(text) + "'");
  }
  Int value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, field, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text, std::size_t line) {
  if (text.empty() || text == "false" || text == "0") return false;
  if (text == "true" || text == "1") return true;
  throw ParseError(line, "internal", "expected true/false, got '" + std::string(text) + "'");
}

WeiAmount parse_value(std::string_view text, std::size_t line) {
  try {
    return WeiAmount::parse(text);
  } catch (const std::domain_error&) {
    throw ValidationError(line, "value_wei", "negative value '" + std::string(text) + "'");
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, "value_wei", e.what());
  }
}

std::string parse_address_field(std::string_view text, std::size_t line, const char* field) {
  try {
    return normalize_address(text);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(line, field, e.what());
  }
}

std::string parse_hash_field(std::string_view text, std::size_t line) {
  try {
    return normalize_tx_hash(text);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(line, "tx_hash", e.what());
  }
}

TransactionRecord record_from_fields(const std::vector<std::string>& f, std::size_t line) {
  TransactionRecord r;
  r.tx_hash = parse_hash_field(f[0], line);
  if (f[1].empty()) {
    throw ValidationError(line, "from_addr", "empty sender address");
  }
  r.from_addr = parse_address_field(f[1], line, "from_addr");
  if (!f[2].empty()) {
    r.to_addr = parse_address_field(f[2], line, "to_addr");
  }
  r.value = parse_value(f[3], line);
  r.gas_limit = parse_int<std::uint64_t>(f[4], line, "gas_limit");
  r.timestamp = parse_int<std::int64_t>(f[5], line, "timestamp");
  r.block_number = parse_int<std::uint64_t>(f[6], line, "block_number");
  if (f.size() > 7) {
    r.internal = parse_bool(f[7], line);
  }
  return r;
}

/// Returns the column count the data rows must have.
std::size_t check_header(const std::string& header_line) {
  std::vector<std::string> fields;
  if (!csv::split_line(header_line, fields)) {
    throw ParseError(1, "header", "unterminated quote");
  }
  const std::size_t full = std::size(kTransactionColumns);
  if (fields.size() != full && fields.size() != full - 1) {
    throw ParseError(1, "header", "expected columns tx_hash,from_addr,to_addr,value_wei,gas_limit,timestamp,block_number[,internal]");
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] != kTransactionColumns[i]) {
      throw ParseError(1, std::string(kTransactionColumns[i]),
                       "header column " + std::to_string(i + 1) + " is '" + fields[i] + "'");
    }
  }
  return fields.size();
}

template <class OnRecord, class OnIssue>
void parse_stream(std::istream& in, InputFormat format, bool strict, OnRecord&& on_record, OnIssue&& on_issue) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  std::vector<std::string> fields;

  if (format == InputFormat::csv) {
    if (!csv::read_line(in, line)) {
      throw ParseError(1, "header", "missing header row");
    }
    ++line_no;
    width = check_header(line);
  }

  while (csv::read_line(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      if (format == InputFormat::csv) {
        if (!csv::split_line(line, fields)) {
          throw ParseError(line_no, "row", "unterminated quote");
        }
        if (fields.size() != width) {
          throw ParseError(line_no, "row",
                           "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
        }
        on_record(record_from_fields(fields, line_no), line_no);
      } else {
        json object;
        try {
          object = json::parse(line);
        } catch (const json::parse_error& e) {
          throw ParseError(line_no, "row", e.what());
        }
        on_record(record_from_json(object, line_no), line_no);
      }
    } catch (const ParseError& e) {
      if (strict) throw;
      on_issue(e);
    }
  }
}

std::string json_scalar_text(const json& value, std::size_t line, const char* field) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  throw ParseError(line, field, "expected a string or integer");
}

bool has_source(std::string_view list, std::string_view source) {
  while (!list.empty()) {
    const auto cut = list.find(';');
    if (list.substr(0, cut) == source) return true;
    if (cut == std::string_view::npos) break;
    list.remove_prefix(cut + 1);
  }
  return false;
}

}  // namespace

std::string_view to_string(Label label) { return label == Label::scam ? "scam" : "nonscam"; }

Label parse_label(std::string_view text) {
  if (text == "scam" || text == "+1" || text == "1") return Label::scam;
  if (text == "nonscam" || text == "-1") return Label::nonscam;
  throw std::invalid_argument("label must be scam or nonscam, got '" + std::string(text) + "'");
}

bool block_order(const TransactionRecord& a, const TransactionRecord& b) {
  if (a.block_number != b.block_number) return a.block_number < b.block_number;
  return a.tx_hash < b.tx_hash;
}

LabelCounts count_labels(const LabelMap& labels) {
  LabelCounts counts;
  for (const auto& [address, label] : labels) {
    (label.label == Label::scam ? counts.scam : counts.nonscam) += 1;
  }
  return counts;
}

std::string normalize_address(std::string_view text) { return normalize_hex(text, 40, "address"); }

std::string normalize_tx_hash(std::string_view text) { return normalize_hex(text, 64, "transaction hash"); }

bool is_normalized_address(std::string_view text) {
  if (text.size() != 42 || text.substr(0, 2) != "0x") return false;
  return std::all_of(text.begin() + 2, text.end(),
                     [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

std::vector<TransactionRecord> parse_transactions(std::istream& in, InputFormat format) {
  std::vector<TransactionRecord> records;
  std::unordered_set<std::string> seen;
  parse_stream(
      in, format, true,
      [&](TransactionRecord r, std::size_t line) {
        if (!seen.insert(r.tx_hash).second) {
          throw ValidationError(line, "tx_hash", "duplicate transaction hash " + r.tx_hash);
        }
        records.push_back(std::move(r));
      },
      [](const ParseError&) {});
  return records;
}

LenientParse parse_transactions_lenient(std::istream& in, InputFormat format) {
  LenientParse result;
  std::unordered_set<std::string> seen;
  parse_stream(
      in, format, false,
      [&](TransactionRecord r, std::size_t line) {
        if (!seen.insert(r.tx_hash).second) {
          throw ValidationError(line, "tx_hash", "duplicate transaction hash " + r.tx_hash);
        }
        result.records.push_back(std::move(r));
      },
      [&](const ParseError& e) {
        result.issues.push_back({e.line(), e.field(), e.what()});
      });
  return result;
}

void write_transactions(std::ostream& out, std::span<const TransactionRecord> records) {
  std::vector<const TransactionRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return block_order(*a, *b); });

  for (std::size_t i = 0; i < std::size(kTransactionColumns); ++i) {
    out << (i ? "," : "") << kTransactionColumns[i];
  }
  out << '\n';
  for (const auto* r : sorted) {
    out << r->tx_hash << ',' << r->from_addr << ',' << r->to_addr.value_or("") << ',' << r->value.str() << ','
        << r->gas_limit << ',' << r->timestamp << ',' << r->block_number << ',' << (r->internal ? "true" : "false")
        << '\n';
  }
}

nlohmann::json to_json(const TransactionRecord& r) {
  json j;
  j["tx_hash"] = r.tx_hash;
  j["from_addr"] = r.from_addr;
  j["to_addr"] = r.to_addr ? json(*r.to_addr) : json(nullptr);
  j["value_wei"] = r.value.str();
  j["gas_limit"] = r.gas_limit;
  j["timestamp"] = r.timestamp;
  j["block_number"] = r.block_number;
  j["internal"] = r.internal;
  return j;
}

TransactionRecord record_from_json(const nlohmann::json& object, std::size_t line) {
  if (!object.is_object()) {
    throw ParseError(line, "row", "expected a JSON object");
  }
  std::vector<std::string> fields;
  for (std::size_t i = 0; i < std::size(kTransactionColumns); ++i) {
    const std::string key(kTransactionColumns[i]);
    const auto it = object.find(key);
    if (it == object.end() || it->is_null()) {
      if (key == "to_addr" || key == "internal") {
        fields.emplace_back();
        continue;
      }
      throw ParseError(line, key, "missing field");
    }
    if (key == "internal") {
      if (!it->is_boolean()) throw ParseError(line, key, "expected a boolean");
      fields.emplace_back(it->get<bool>() ? "true" : "false");
    } else if (key == "tx_hash" || key == "from_addr" || key == "to_addr") {
      if (!it->is_string()) throw ParseError(line, key, "expected a string");
      fields.push_back(it->get<std::string>());
    } else {
      fields.push_back(json_scalar_text(*it, line, key.c_str()));
    }
  }
  return record_from_fields(fields, line);
}

LabelMap load_labels(std::istream& in) {
  std::string line;
  std::vector<std::string> fields;
  if (!csv::read_line(in, line)) {
    throw ParseError(1, "header", "missing header row");
  }
  if (!csv::split_line(line, fields) || fields != std::vector<std::string>{"address", "label", "source"}) {
    throw ParseError(1, "header", "expected columns address,label,source");
  }

  LabelMap labels;
  std::size_t line_no = 1;
  while (csv::read_line(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!csv::split_line(line, fields) || fields.size() != 3) {
      throw ParseError(line_no, "row", "expected 3 fields");
    }
    AddressLabel entry;
    entry.address = parse_address_field(fields[0], line_no, "address");
    try {
      entry.label = parse_label(fields[1]);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(line_no, "label", e.what());
    }
    entry.source = fields[2];

    auto [it, inserted] = labels.try_emplace(entry.address, entry);
    if (inserted) continue;
    auto& existing = it->second;
    if (existing.label != entry.label) {
      throw LabelConflictError("conflicting labels for " + entry.address + ": " +
                               std::string(to_string(existing.label)) + " from '" + existing.source + "' vs " +
                               std::string(to_string(entry.label)) + " from '" + entry.source + "' (line " +
                               std::to_string(line_no) + ")");
    }
    if (!entry.source.empty() && !has_source(existing.source, entry.source)) {
      existing.source += existing.source.empty() ? entry.source : ";" + entry.source;
    }
  }
  return labels;
}

void write_labels(std::ostream& out, const LabelMap& labels) {
  out << "address,label,source\n";
  for (const auto& [address, label] : labels) {
    out << address << ',' << to_string(label.label) << ',' << csv::escape(label.source) << '\n';
  }
}

}  // namespace benfordscan
