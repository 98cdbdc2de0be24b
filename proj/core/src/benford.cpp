#include "benfordscan/benford.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "benfordscan/error.hpp"

namespace benfordscan {

namespace {

std::size_t index_of(DigitPosition position, int digit) {
  const int lo = lowest_digit(position);
  if (digit < lo || digit > 9) {
    throw ContractError("digit " + std::to_string(digit) + " outside the " + std::string(to_string(position)) +
                        "-digit support");
  }
  return static_cast<std::size_t>(digit - lo);
}

void require_same_support(const DigitDistribution& a, const DigitDistribution& b) {
  if (a.position() != b.position()) {
    throw ContractError("distributions are over different digit positions");
  }
}

std::string format_mass(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

std::string_view to_string(DigitPosition p) { return p == DigitPosition::first ? "first" : "second"; }

DigitDistribution::DigitDistribution(DigitPosition position, std::vector<double> mass, std::size_t sample_count,
                                     std::size_t skipped_count)
    : position_(position), mass_(std::move(mass)), sample_count_(sample_count), skipped_count_(skipped_count) {
  if (mass_.size() != support_size(position_)) {
    throw ContractError("expected " + std::to_string(support_size(position_)) + " masses, got " +
                        std::to_string(mass_.size()));
  }
  double total = 0.0;
  for (const double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw ContractError("digit masses must be finite and non-negative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ContractError("digit masses sum to " + format_mass(total) + ", not 1");
  }
}

double DigitDistribution::at(int digit) const { return mass_[index_of(position_, digit)]; }

int significant_digit(std::string_view decimal, DigitPosition position) {
  if (decimal.empty()) {
    throw NoSignificantDigitError("empty value");
  }
  if (decimal.front() == '-') {
    throw NoSignificantDigitError("negative value " + std::string(decimal));
  }
  int first = -1;
  bool seen_point = false;
  for (const char c : decimal) {
    if (c == '.') {
      if (seen_point) throw NoSignificantDigitError("malformed decimal " + std::string(decimal));
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') {
      throw NoSignificantDigitError("malformed decimal " + std::string(decimal));
    }
    const int d = c - '0';
    if (first < 0) {
      if (d == 0) continue;
      first = d;
      if (position == DigitPosition::first) return first;
      continue;
    }
    return d;
  }
  if (first < 0) {
    throw NoSignificantDigitError("value " + std::string(decimal) + " has no significant digit");
  }
  // Single significant digit: the significand is d.000...
  return 0;
}

int significant_digit(const WeiAmount& value, DigitPosition position) {
  if (value.is_zero()) {
    throw NoSignificantDigitError("zero has no significant digit");
  }
  const auto& s = value.str();
  if (position == DigitPosition::first) return s[0] - '0';
  return s.size() > 1 ? s[1] - '0' : 0;
}

int significant_digit(double value, DigitPosition position) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw NoSignificantDigitError("value " + format_mass(value) + " has no significant digit");
  }
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  (void)ec;
  if (position == DigitPosition::first) return buf[0] - '0';
  return (buf[1] == '.') ? buf[2] - '0' : 0;
}

DigitDistribution benford_expected(DigitPosition position) {
  std::vector<double> mass;
  if (position == DigitPosition::first) {
    for (int d = 1; d <= 9; ++d) mass.push_back(std::log10(1.0 + 1.0 / d));
  } else {
    for (int d2 = 0; d2 <= 9; ++d2) {
      double p = 0.0;
      for (int d1 = 1; d1 <= 9; ++d1) p += std::log10(1.0 + 1.0 / (10.0 * d1 + d2));
      mass.push_back(p);
    }
  }
  return DigitDistribution(position, std::move(mass));
}

void DigitTally::add(const WeiAmount& value) {
  if (value.is_zero()) {
    ++skipped_;
    return;
  }
  ++first_[significant_digit(value, DigitPosition::first)];
  ++second_[significant_digit(value, DigitPosition::second)];
  ++valid_;
}

void DigitTally::add(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    ++skipped_;
    return;
  }
  ++first_[significant_digit(value, DigitPosition::first)];
  ++second_[significant_digit(value, DigitPosition::second)];
  ++valid_;
}

std::size_t DigitTally::count(DigitPosition position, int digit) const {
  index_of(position, digit);
  return position == DigitPosition::first ? first_[digit] : second_[digit];
}

DigitDistribution DigitTally::distribution(DigitPosition position) const {
  if (valid_ == 0) {
    throw EmptyDistributionError("no value with a significant digit (" + std::to_string(skipped_) + " skipped)");
  }
  const auto& counts = position == DigitPosition::first ? first_ : second_;
  std::vector<double> mass;
  for (int d = lowest_digit(position); d <= 9; ++d) {
    mass.push_back(static_cast<double>(counts[d]) / static_cast<double>(valid_));
  }
  // Guard the sum invariant against accumulated rounding on large supports.
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    for (double& m : mass) m /= total;
  }
  return DigitDistribution(position, std::move(mass), valid_, skipped_);
}

DigitDistribution observed_distribution(std::span<const WeiAmount> values, DigitPosition position) {
  DigitTally tally;
  for (const auto& v : values) tally.add(v);
  return tally.distribution(position);
}

DigitDistribution observed_distribution(std::span<const double> values, DigitPosition position) {
  DigitTally tally;
  for (const double v : values) tally.add(v);
  return tally.distribution(position);
}

double chi_squared(const DigitDistribution& observed, const DigitDistribution& expected) {
  require_same_support(observed, expected);
  const auto o = observed.mass();
  const auto e = expected.mass();
  double sum = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (!(e[i] > 0.0)) {
      throw ContractError("expected distribution has zero mass at a support digit");
    }
    const double diff = o[i] - e[i];
    sum += diff * diff / e[i];
  }
  return sum;
}

double ks_statistic(const DigitDistribution& observed, const DigitDistribution& expected) {
  require_same_support(observed, expected);
  const auto o = observed.mass();
  const auto e = expected.mass();
  double cdf_o = 0.0;
  double cdf_e = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    cdf_o += o[i];
    cdf_e += e[i];
    worst = std::max(worst, std::abs(cdf_o - cdf_e));
  }
  return std::min(worst, 1.0);
}

FitStatistics benford_fit(const DigitDistribution& observed) {
  const auto expected = benford_expected(observed.position());
  return {chi_squared(observed, expected), ks_statistic(observed, expected), observed.sample_count()};
}

AddressFit fit_tally(const DigitTally& tally) {
  return {benford_fit(tally.distribution(DigitPosition::first)),
          benford_fit(tally.distribution(DigitPosition::second)), tally.skipped()};
}

AddressFit fit_address(std::span<const WeiAmount> values) {
  DigitTally tally;
  for (const auto& v : values) tally.add(v);
  return fit_tally(tally);
}

void write_distribution_csv(std::ostream& out, const DigitDistribution& observed, const DigitDistribution& expected) {
  require_same_support(observed, expected);
  out << "digit,observed_mass,expected_mass\n";
  const int lo = lowest_digit(observed.position());
  for (int d = lo; d <= 9; ++d) {
    out << d << ',' << format_mass(observed.at(d)) << ',' << format_mass(expected.at(d)) << '\n';
  }
}

}  // namespace benfordscan
