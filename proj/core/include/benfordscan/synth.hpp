#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "benfordscan/features.hpp"
#include "benfordscan/ingest.hpp"

namespace benfordscan {

/// Synthetic dataset parameters.
///
/// Legitimate addresses draw values log-uniformly over `legit_decades` whole
/// decades starting at 10^a, which is exactly Benford at every digit
/// position; a is drawn per address from
/// [legit_min_exponent, legit_min_exponent + exponent_jitter].
///
/// Scam addresses draw uniform integers within one decade (uniform first
/// digits). With match_statistics the decade of each transfer follows the
/// legitimate magnitude profile; otherwise it is fixed at `scam_decade`.
/// A `scam_mimic_fraction` of scam addresses instead copy the legitimate
/// value law (Benford first digits). On top of either, each scam transfer is
/// a round amount with probability `scam_round_fraction`: its digits after
/// the leading one become "00..." or "50...", which breaks the second-digit
/// law but keeps the first digit.
struct GeneratorConfig {
  std::size_t n_legit = 200;
  std::size_t n_scam = 20;
  std::size_t tx_min = 100;
  std::size_t tx_max = 2000;
  int legit_decades = 3;
  double legit_min_exponent = 14.0;
  double exponent_jitter = 2.0;
  int scam_decade = 16;
  bool match_statistics = true;
  double scam_round_fraction = 0.4;
  double scam_mimic_fraction = 0.5;
  std::size_t counterparty_pool = 500;
  std::uint64_t seed = 0;
};

/// Throws ContractError for an invalid configuration.
void validate(const GeneratorConfig& config);

struct SyntheticDataset {
  std::vector<TransactionRecord> records;  // block order
  LabelMap labels;
};

/// Deterministic in `config.seed`. Counterparties come from a shared pool of
/// unlabeled addresses, so labeled addresses never transact with each other.
SyntheticDataset generate(const GeneratorConfig& config);

/// Two-sample location check (Mann-Whitney U, normal approximation) of one
/// non-Benford feature between scam and non-scam examples.
struct LocationTest {
  std::string feature;
  double z = 0.0;
  bool separated = false;  // |z| above the threshold
};

/// Runs the location check on every count, counterparty and gas column.
std::vector<LocationTest> check_matched_statistics(std::span<const LabeledExample> examples,
                                                   double z_threshold = 3.29);

}  // namespace benfordscan
