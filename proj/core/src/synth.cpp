#include "benfordscan/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "benfordscan/error.hpp"
#include "benfordscan/random.hpp"

namespace benfordscan {

namespace {

constexpr char kHex[] = "0123456789abcdef";

std::string random_hex(Rng& rng, std::size_t digits) {
  std::string out;
  out.reserve(digits);
  while (out.size() < digits) {
    std::uint64_t bits = rng.next();
    for (int i = 0; i < 16 && out.size() < digits; ++i, bits >>= 4) out.push_back(kHex[bits & 0xf]);
  }
  return out;
}

std::string counter_hex(std::uint64_t value) {
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) out[static_cast<std::size_t>(i)] = kHex[value & 0xf];
  return out;
}

/// round(10^exponent) as exact decimal text.
std::string power_of_ten_integer(double exponent) {
  const double v = std::pow(10.0, exponent);
  char buf[512];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 0);
  if (ec != std::errc{}) throw ContractError("value exponent out of range");
  return std::string(buf, end);
}

/// Uniform integer on [10^decade, 10^(decade+1)).
std::string uniform_in_decade(Rng& rng, int decade) {
  std::string out;
  out.push_back(static_cast<char>('1' + rng.below(9)));
  for (int i = 0; i < decade; ++i) out.push_back(static_cast<char>('0' + rng.below(10)));
  return out;
}

void make_round(Rng& rng, std::string& digits) {
  if (digits.size() < 2) return;
  const bool half = rng.bernoulli(0.5);
  std::fill(digits.begin() + 1, digits.end(), '0');
  if (half) digits[1] = '5';
}

struct AddressPlan {
  std::string address;
  Label label;
  bool mimic = false;
};

// Mann-Whitney U z-score for xs vs ys (average ranks for ties).
double mann_whitney_z(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<std::pair<double, int>> all;
  for (const double x : xs) all.emplace_back(x, 0);
  for (const double y : ys) all.emplace_back(y, 1);
  std::sort(all.begin(), all.end());
  double rank_sum_x = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second == 0) rank_sum_x += avg_rank;
    }
    i = j;
  }
  const double n1 = static_cast<double>(xs.size());
  const double n2 = static_cast<double>(ys.size());
  const double u = rank_sum_x - n1 * (n1 + 1.0) / 2.0;
  const double sd = std::sqrt(n1 * n2 * (n1 + n2 + 1.0) / 12.0);
  return sd > 0.0 ? (u - n1 * n2 / 2.0) / sd : 0.0;
}

}  // namespace

void validate(const GeneratorConfig& c) {
  if (c.n_legit + c.n_scam == 0) throw ContractError("generator needs at least one address");
  if (c.tx_min == 0 || c.tx_max < c.tx_min) throw ContractError("transaction range must satisfy 1 <= tx_min <= tx_max");
  if (c.legit_decades < 1) throw ContractError("legit_decades must be at least 1");
  if (c.scam_decade < 0) throw ContractError("scam_decade must be non-negative");
  if (c.legit_min_exponent < 0.0 || c.exponent_jitter < 0.0) throw ContractError("exponents must be non-negative");
  if (!(c.scam_round_fraction >= 0.0 && c.scam_round_fraction <= 1.0) ||
      !(c.scam_mimic_fraction >= 0.0 && c.scam_mimic_fraction <= 1.0)) {
    throw ContractError("scam fractions must lie in [0, 1]");
  }
  if (c.counterparty_pool == 0) throw ContractError("counterparty_pool must be positive");
}

SyntheticDataset generate(const GeneratorConfig& config) {
  validate(config);
  Rng rng(config.seed);
  std::set<std::string> used;
  auto fresh_address = [&] {
    for (;;) {
      auto a = "0x" + random_hex(rng, 40);
      if (used.insert(a).second) return a;
    }
  };

  std::vector<std::string> pool;
  for (std::size_t i = 0; i < config.counterparty_pool; ++i) pool.push_back(fresh_address());

  const auto n_mimic =
      static_cast<std::size_t>(std::floor(static_cast<double>(config.n_scam) * config.scam_mimic_fraction));
  std::vector<AddressPlan> plans;
  for (std::size_t i = 0; i < config.n_legit; ++i) plans.push_back({fresh_address(), Label::nonscam});
  for (std::size_t i = 0; i < config.n_scam; ++i) {
    plans.push_back({fresh_address(), Label::scam, i >= config.n_scam - n_mimic});
  }

  SyntheticDataset out;
  std::uint64_t tx_index = 0;
  for (const auto& plan : plans) {
    const bool scam = plan.label == Label::scam;
    const bool distinct_scam = scam && !config.match_statistics;
    out.labels.emplace(plan.address, AddressLabel{plan.address, plan.label, "synthetic"});

    const auto n_tx = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(config.tx_min), static_cast<std::int64_t>(config.tx_max)));
    const double base = config.legit_min_exponent + config.exponent_jitter * rng.uniform();

    for (std::size_t t = 0; t < n_tx; ++t) {
      TransactionRecord r;
      r.tx_hash = "0x" + random_hex(rng, 48) + counter_hex(tx_index);
      r.block_number = 15'000'000 + tx_index / 4;
      r.timestamp = 1'650'000'000 + static_cast<std::int64_t>(12 * (tx_index / 4));
      ++tx_index;

      const bool incoming = rng.bernoulli(distinct_scam ? 0.8 : 0.5);
      const auto& other = pool[rng.below(pool.size())];
      r.from_addr = incoming ? other : plan.address;
      r.to_addr = incoming ? plan.address : other;

      if (distinct_scam) {
        r.gas_limit = static_cast<std::uint64_t>(rng.between(50'000, 500'000));
      } else {
        r.gas_limit = rng.bernoulli(0.5) ? 21'000 : static_cast<std::uint64_t>(rng.between(21'000, 300'000));
      }

      const double magnitude = base + config.legit_decades * rng.uniform();
      std::string digits;
      if (!scam || plan.mimic) {
        digits = power_of_ten_integer(magnitude);
      } else {
        const int decade = config.match_statistics ? static_cast<int>(std::floor(magnitude)) : config.scam_decade;
        digits = uniform_in_decade(rng, decade);
      }
      if (scam && rng.bernoulli(config.scam_round_fraction)) make_round(rng, digits);
      r.value = WeiAmount::parse(digits);
      out.records.push_back(std::move(r));
    }
  }
  std::sort(out.records.begin(), out.records.end(), block_order);
  return out;
}

std::vector<LocationTest> check_matched_statistics(std::span<const LabeledExample> examples, double z_threshold) {
  std::vector<LocationTest> tests;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const auto name = kFeatureNames[i];
    if (is_benford_feature(name) || name.find("value") != std::string_view::npos) continue;
    std::vector<double> scam, legit;
    for (const auto& ex : examples) {
      if (const auto v = ex.features.values[i]) (ex.label == Label::scam ? scam : legit).push_back(*v);
    }
    LocationTest t{std::string(name), 0.0, false};
    if (!scam.empty() && !legit.empty()) {
      t.z = mann_whitney_z(scam, legit);
      t.separated = std::abs(t.z) > z_threshold;
    }
    tests.push_back(std::move(t));
  }
  return tests;
}

}  // namespace benfordscan
