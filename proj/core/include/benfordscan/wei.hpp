#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace benfordscan {

/// Non-negative integer amount of wei held as its canonical decimal string.
///
/// Transfer values routinely exceed 2^64 (anything above ~18.4 ether), so the
/// exact digits are kept and only converted to floating point for moment
/// statistics. Digit extraction always works on the exact string.
class WeiAmount {
 public:
  WeiAmount() : digits_("0") {}

  /// Parses an unsigned decimal integer. Leading zeros are dropped; signs,
  /// whitespace, fractions and exponents are rejected with
  /// std::invalid_argument. A leading '-' raises std::domain_error so callers
  /// can report negative amounts separately from garbage.
  static WeiAmount parse(std::string_view text);
  static WeiAmount from_uint(std::uint64_t value);

  const std::string& str() const noexcept { return digits_; }
  bool is_zero() const noexcept { return digits_ == "0"; }

  /// Nearest double (correctly rounded).
  double to_double() const;

  friend bool operator==(const WeiAmount&, const WeiAmount&) = default;
  friend std::strong_ordering operator<=>(const WeiAmount& a, const WeiAmount& b);

 private:
  explicit WeiAmount(std::string digits) : digits_(std::move(digits)) {}
  std::string digits_;
};

}  // namespace benfordscan
