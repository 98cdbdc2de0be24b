#include "benfordscan/wei.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace benfordscan {

WeiAmount WeiAmount::parse(std::string_view text) {
  if (text.empty()) {
    throw std::invalid_argument("empty amount");
  }
  if (text.front() == '-') {
    throw std::domain_error("negative amount");
  }
  if (!std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw std::invalid_argument("amount is not an unsigned decimal integer: " + std::string(text));
  }
  const auto first_nonzero = text.find_first_not_of('0');
  if (first_nonzero == std::string_view::npos) {
    return WeiAmount{};
  }
  return WeiAmount(std::string(text.substr(first_nonzero)));
}

WeiAmount WeiAmount::from_uint(std::uint64_t value) { return WeiAmount(std::to_string(value)); }

double WeiAmount::to_double() const { return std::strtod(digits_.c_str(), nullptr); }

std::strong_ordering operator<=>(const WeiAmount& a, const WeiAmount& b) {
  if (a.digits_.size() != b.digits_.size()) {
    return a.digits_.size() <=> b.digits_.size();
  }
  return a.digits_.compare(b.digits_) <=> 0;
}

}  // namespace benfordscan
