#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace benfordscan::csv {

/// Splits one CSV record. Supports RFC 4180 double-quoted fields without
/// embedded newlines. Returns false on an unterminated quote.
bool split_line(std::string_view line, std::vector<std::string>& fields);

/// Quotes a field only when it contains a delimiter, quote or newline.
std::string escape(std::string_view field);

/// Reads a line, stripping a trailing '\r'.
bool read_line(std::istream& in, std::string& line);

}  // namespace benfordscan::csv
