#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "benfordscan/ingest.hpp"
#include "benfordscan/txgraph.hpp"

namespace benfordscan {

inline constexpr std::size_t kFeatureCount = 20;

/// Canonical column order: eight per-direction statistics for incoming then
/// outgoing transfers, then the four Benford fit statistics.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "in_tx_count",  "in_unique_counterparties",  "in_value_mean",  "in_value_median",  "in_value_std",
    "in_gas_mean",  "in_gas_median",             "in_gas_std",     "out_tx_count",     "out_unique_counterparties",
    "out_value_mean", "out_value_median",        "out_value_std",  "out_gas_mean",     "out_gas_median",
    "out_gas_std",  "chi2_first",                "chi2_second",    "ks_first",         "ks_second"};

inline constexpr std::array<std::string_view, 4> kBenfordFeatureNames = {"chi2_first", "chi2_second", "ks_first",
                                                                          "ks_second"};

/// Literal used for a missing statistic in CSV files.
inline constexpr std::string_view kMissingMarker = "NA";

std::optional<std::size_t> feature_index(std::string_view name);
bool is_benford_feature(std::string_view name);

/// Per-address features. std::nullopt marks a statistic that does not exist
/// (no transfers in that direction, no value with a significant digit); it is
/// never conflated with 0.
struct FeatureVector {
  std::array<std::optional<double>, kFeatureCount> values{};

  std::optional<double> get(std::string_view name) const;
  void set(std::string_view name, std::optional<double> value);

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct LabeledExample {
  std::string address;
  FeatureVector features;
  Label label = Label::nonscam;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

/// Counts, value and gas moments per direction (population std) plus the
/// Benford fit of the pooled in+out values, each transaction counted once.
FeatureVector extract_features(const AddressNeighborhood& neighborhood);

/// One example per labeled address, in address order. Labeled addresses
/// missing from the graph, or without any non-zero value, are kept and
/// reported through `warnings`.
std::vector<LabeledExample> build_dataset(const TransactionGraph& graph, const LabelMap& labels,
                                          std::vector<std::string>* warnings = nullptr);

/// address,<20 features>,label with `NA` for missing and labels as 1/-1.
void write_matrix(std::ostream& out, std::span<const LabeledExample> examples);
/// Throws SchemaError on a header that is not exactly the canonical layout.
std::vector<LabeledExample> read_matrix(std::istream& in);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace benfordscan
