#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "benfordscan/wei.hpp"

namespace benfordscan {

/// Digit position within the decimal significand. First digits range over
/// 1..9, second digits over 0..9.
enum class DigitPosition { first, second };

constexpr int lowest_digit(DigitPosition p) noexcept { return p == DigitPosition::first ? 1 : 0; }
constexpr std::size_t support_size(DigitPosition p) noexcept { return p == DigitPosition::first ? 9 : 10; }
std::string_view to_string(DigitPosition p);

/// Probability mass over a digit position's support.
///
/// Invariants: masses are non-negative and sum to 1 within 1e-12. Analytic
/// laws carry sample_count 0.
class DigitDistribution {
 public:
  DigitDistribution(DigitPosition position, std::vector<double> mass, std::size_t sample_count = 0,
                    std::size_t skipped_count = 0);

  DigitPosition position() const noexcept { return position_; }
  std::span<const double> mass() const noexcept { return mass_; }
  double at(int digit) const;
  std::size_t sample_count() const noexcept { return sample_count_; }
  /// Values that had no digit at this position (zeros).
  std::size_t skipped_count() const noexcept { return skipped_count_; }

 private:
  DigitPosition position_;
  std::vector<double> mass_;
  std::size_t sample_count_;
  std::size_t skipped_count_;
};

struct FitStatistics {
  double chi_squared = 0.0;
  double ks = 0.0;
  std::size_t sample_count = 0;
};

struct AddressFit {
  FitStatistics first;
  FitStatistics second;
  std::size_t skipped = 0;  // zero-valued transfers
};

/// Reads the digit at `position` off the exact decimal expansion. A value
/// with a single significant digit has second digit 0.
/// Throws NoSignificantDigitError for zero.
int significant_digit(const WeiAmount& value, DigitPosition position);
/// Plain decimal text such as "1426" or "0.0042".
int significant_digit(std::string_view decimal, DigitPosition position);
/// Uses the shortest decimal representation that round-trips the double.
int significant_digit(double value, DigitPosition position);

DigitDistribution benford_expected(DigitPosition position);

/// Per-position digit counts with a skip counter for zeros.
class DigitTally {
 public:
  void add(const WeiAmount& value);
  void add(double value);

  std::size_t valid() const noexcept { return valid_; }
  std::size_t skipped() const noexcept { return skipped_; }
  std::size_t count(DigitPosition position, int digit) const;

  /// Throws EmptyDistributionError when no value had a significant digit.
  DigitDistribution distribution(DigitPosition position) const;

 private:
  std::array<std::size_t, 10> first_{};
  std::array<std::size_t, 10> second_{};
  std::size_t valid_ = 0;
  std::size_t skipped_ = 0;
};

DigitDistribution observed_distribution(std::span<const WeiAmount> values, DigitPosition position);
DigitDistribution observed_distribution(std::span<const double> values, DigitPosition position);

/// Proportion-based Pearson distance: sum over the support of
/// (p_obs - p_exp)^2 / p_exp. Throws ContractError on mismatched positions or
/// a zero expected mass.
double chi_squared(const DigitDistribution& observed, const DigitDistribution& expected);

/// Largest absolute gap between the two digit CDFs, ascending digit order.
double ks_statistic(const DigitDistribution& observed, const DigitDistribution& expected);

/// Both statistics against Benford's law for the distribution's position.
FitStatistics benford_fit(const DigitDistribution& observed);

/// First- and second-digit fit of one address's transfer values.
AddressFit fit_address(std::span<const WeiAmount> values);
AddressFit fit_tally(const DigitTally& tally);

/// digit,observed_mass,expected_mass
void write_distribution_csv(std::ostream& out, const DigitDistribution& observed, const DigitDistribution& expected);

}  // namespace benfordscan
