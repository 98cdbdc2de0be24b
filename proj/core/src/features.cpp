#include "benfordscan/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "benfordscan/benford.hpp"
#include "benfordscan/error.hpp"
#include "csv.hpp"

namespace benfordscan {

namespace {

struct Moments {
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<double> stddev;
};

// Sorting first makes the result independent of input order, bit for bit.
Moments moments(std::vector<double> xs) {
  if (xs.empty()) return {};
  std::sort(xs.begin(), xs.end());
  const auto n = static_cast<long double>(xs.size());
  long double sum = 0.0L;
  for (const double x : xs) sum += x;
  const long double mean = sum / n;
  long double sq = 0.0L;
  for (const double x : xs) sq += (x - mean) * (x - mean);

  const std::size_t mid = xs.size() / 2;
  const double median = xs.size() % 2 ? xs[mid] : std::midpoint(xs[mid - 1], xs[mid]);
  return {static_cast<double>(mean), median, static_cast<double>(std::sqrt(sq / n))};
}

void fill_direction(FeatureVector& f, std::size_t base, std::span<const TransactionRecord> records,
                    std::size_t counterparties) {
  std::vector<double> values;
  std::vector<double> gas;
  for (const auto& r : records) {
    values.push_back(r.value.to_double());
    gas.push_back(static_cast<double>(r.gas_limit));
  }
  const auto v = moments(std::move(values));
  const auto g = moments(std::move(gas));
  f.values[base + 0] = static_cast<double>(records.size());
  f.values[base + 1] = static_cast<double>(counterparties);
  f.values[base + 2] = v.mean;
  f.values[base + 3] = v.median;
  f.values[base + 4] = v.stddev;
  f.values[base + 5] = g.mean;
  f.values[base + 6] = g.median;
  f.values[base + 7] = g.stddev;
}

std::optional<double> parse_cell(const std::string& text, std::size_t line, std::string_view column) {
  if (text == kMissingMarker) return std::nullopt;
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, std::string(column), "expected a number or NA, got '" + text + "'");
  }
  return value;
}

}  // namespace

std::optional<std::size_t> feature_index(std::string_view name) {
  const auto it = std::find(kFeatureNames.begin(), kFeatureNames.end(), name);
  if (it == kFeatureNames.end()) return std::nullopt;
  return static_cast<std::size_t>(it - kFeatureNames.begin());
}

bool is_benford_feature(std::string_view name) {
  return std::find(kBenfordFeatureNames.begin(), kBenfordFeatureNames.end(), name) != kBenfordFeatureNames.end();
}

std::optional<double> FeatureVector::get(std::string_view name) const {
  const auto i = feature_index(name);
  if (!i) throw ContractError("unknown feature " + std::string(name));
  return values[*i];
}

void FeatureVector::set(std::string_view name, std::optional<double> value) {
  const auto i = feature_index(name);
  if (!i) throw ContractError("unknown feature " + std::string(name));
  values[*i] = value;
}

FeatureVector extract_features(const AddressNeighborhood& neighborhood) {
  FeatureVector f;
  fill_direction(f, 0, neighborhood.incoming, unique_counterparties(neighborhood, Direction::in));
  fill_direction(f, 8, neighborhood.outgoing, unique_counterparties(neighborhood, Direction::out));

  // Pool both directions; a self-transfer is one transaction here.
  std::set<std::string_view> seen;
  DigitTally tally;
  for (const auto* list : {&neighborhood.incoming, &neighborhood.outgoing}) {
    for (const auto& r : *list) {
      if (seen.insert(r.tx_hash).second) tally.add(r.value);
    }
  }
  if (tally.valid() > 0) {
    const auto fit = fit_tally(tally);
    f.values[16] = fit.first.chi_squared;
    f.values[17] = fit.second.chi_squared;
    f.values[18] = fit.first.ks;
    f.values[19] = fit.second.ks;
  }
  return f;
}

std::vector<LabeledExample> build_dataset(const TransactionGraph& graph, const LabelMap& labels,
                                          std::vector<std::string>* warnings) {
  std::vector<LabeledExample> examples;
  examples.reserve(labels.size());
  for (const auto& [address, label] : labels) {
    if (warnings && !graph.contains(address)) {
      warnings->push_back("labeled address " + address + " has no transactions in the graph");
    }
    LabeledExample ex{address, extract_features(graph.neighborhood(address)), label.label};
    if (warnings && graph.contains(address) && !ex.features.values[16]) {
      warnings->push_back("labeled address " + address + " has no non-zero transfer; Benford features missing");
    }
    examples.push_back(std::move(ex));
  }
  return examples;
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, end);
}

void write_matrix(std::ostream& out, std::span<const LabeledExample> examples) {
  out << "address";
  for (const auto name : kFeatureNames) out << ',' << name;
  out << ",label\n";
  for (const auto& ex : examples) {
    out << ex.address;
    for (const auto& v : ex.features.values) {
      out << ',' << (v ? format_double(*v) : std::string(kMissingMarker));
    }
    out << ',' << static_cast<int>(ex.label) << '\n';
  }
}

std::vector<LabeledExample> read_matrix(std::istream& in) {
  std::string line;
  std::vector<std::string> fields;
  if (!csv::read_line(in, line)) {
    throw SchemaError("feature matrix is empty; expected a header row");
  }
  csv::split_line(line, fields);

  std::vector<std::string> expected{"address"};
  for (const auto name : kFeatureNames) expected.emplace_back(name);
  expected.emplace_back("label");

  for (const auto& column : fields) {
    if (std::find(expected.begin(), expected.end(), column) == expected.end()) {
      throw SchemaError("unknown column '" + column + "' in feature matrix");
    }
  }
  for (const auto& column : expected) {
    if (std::find(fields.begin(), fields.end(), column) == fields.end()) {
      throw SchemaError("feature matrix is missing column '" + column + "'");
    }
  }
  if (fields != expected) {
    throw SchemaError("feature matrix columns are not in canonical order");
  }

  std::vector<LabeledExample> examples;
  std::size_t line_no = 1;
  while (csv::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    csv::split_line(line, fields);
    if (fields.size() != expected.size()) {
      throw ParseError(line_no, "row",
                       "expected " + std::to_string(expected.size()) + " fields, got " + std::to_string(fields.size()));
    }
    LabeledExample ex;
    try {
      ex.address = normalize_address(fields[0]);
      ex.label = parse_label(fields.back());
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, "address/label", e.what());
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      ex.features.values[i] = parse_cell(fields[i + 1], line_no, kFeatureNames[i]);
    }
    examples.push_back(std::move(ex));
  }
  return examples;
}

}  // namespace benfordscan
