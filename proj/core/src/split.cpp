#include <algorithm>
#include <cmath>

#include "benfordscan/error.hpp"
#include "benfordscan/models.hpp"
#include "benfordscan/random.hpp"

namespace benfordscan {

namespace {

/// Distributes `total` across buckets proportionally to `weights` (largest
/// remainder, ties to the lower index), never exceeding `caps`.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& quotas,
                                   const std::vector<std::size_t>& caps) {
  std::vector<std::size_t> out(quotas.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < quotas.size(); ++i) {
    out[i] = std::min(static_cast<std::size_t>(std::floor(quotas[i])), caps[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(quotas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a] - std::floor(quotas[a]) > quotas[b] - std::floor(quotas[b]);
  });
  while (assigned < total) {
    bool progressed = false;
    for (const auto i : order) {
      if (assigned == total) break;
      if (out[i] < caps[i]) {
        ++out[i];
        ++assigned;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return out;
}

std::vector<LabeledExample> gather(std::span<const LabeledExample> examples, std::vector<std::size_t> idx) {
  std::sort(idx.begin(), idx.end());
  std::vector<LabeledExample> out;
  out.reserve(idx.size());
  for (const auto i : idx) out.push_back(examples[i]);
  return out;
}

}  // namespace

DataSplit split(std::span<const LabeledExample> examples, const SplitSpec& spec) {
  for (const double f : {spec.train_frac, spec.valid_frac, spec.test_frac}) {
    if (!(f >= 0.0 && f <= 1.0)) throw ContractError("split fractions must lie in [0, 1]");
  }
  if (std::abs(spec.train_frac + spec.valid_frac + spec.test_frac - 1.0) > 1e-9) {
    throw ContractError("split fractions must sum to 1");
  }

  // Class 0 = nonscam, class 1 = scam; members kept in input order.
  std::vector<std::vector<std::size_t>> members(2);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    members[examples[i].label == Label::scam ? 1 : 0].push_back(i);
  }
  if (members[0].empty() || members[1].empty()) {
    throw SplitError("both classes need at least one example (got " + std::to_string(members[1].size()) +
                     " scam, " + std::to_string(members[0].size()) + " nonscam)");
  }

  const std::size_t n = examples.size();
  const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.test_frac));
  const auto n_valid = std::min(n - n_test,
                                static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.valid_frac)));

  Rng rng(spec.seed);
  std::vector<std::size_t> train_idx, valid_idx, test_idx;

  if (!spec.stratified) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    rng.shuffle(all.begin(), all.end());
    test_idx.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_test));
    valid_idx.assign(all.begin() + static_cast<std::ptrdiff_t>(n_test),
                     all.begin() + static_cast<std::ptrdiff_t>(n_test + n_valid));
    train_idx.assign(all.begin() + static_cast<std::ptrdiff_t>(n_test + n_valid), all.end());
  } else {
    for (auto& m : members) rng.shuffle(m.begin(), m.end());

    std::vector<double> test_quota, valid_quota;
    std::vector<std::size_t> caps;
    for (const auto& m : members) {
      const double share = static_cast<double>(m.size()) / static_cast<double>(n);
      test_quota.push_back(share * static_cast<double>(n_test));
      valid_quota.push_back(share * static_cast<double>(n_valid));
      caps.push_back(m.size());
    }
    const auto test_counts = apportion(n_test, test_quota, caps);
    for (std::size_t c = 0; c < caps.size(); ++c) caps[c] -= test_counts[c];
    const auto valid_counts = apportion(n_valid, valid_quota, caps);

    const char* names[] = {"nonscam", "scam"};
    for (std::size_t c = 0; c < members.size(); ++c) {
      const auto& m = members[c];
      const std::size_t t = test_counts[c];
      const std::size_t v = valid_counts[c];
      const std::size_t tr = m.size() - t - v;
      if ((n_test > 0 && t == 0) || (n_valid > 0 && v == 0) || (n - n_test - n_valid > 0 && tr == 0)) {
        throw SplitError(std::string("class ") + names[c] + " (" + std::to_string(m.size()) +
                         " examples) cannot be present in every partition; try a different seed or a smaller "
                         "valid_frac");
      }
      test_idx.insert(test_idx.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(t));
      valid_idx.insert(valid_idx.end(), m.begin() + static_cast<std::ptrdiff_t>(t),
                       m.begin() + static_cast<std::ptrdiff_t>(t + v));
      train_idx.insert(train_idx.end(), m.begin() + static_cast<std::ptrdiff_t>(t + v), m.end());
    }
  }

  return {gather(examples, std::move(train_idx)), gather(examples, std::move(valid_idx)),
          gather(examples, std::move(test_idx))};
}

}  // namespace benfordscan
