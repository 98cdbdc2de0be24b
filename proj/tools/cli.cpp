#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "benfordscan/benford.hpp"
#include "benfordscan/error.hpp"
#include "benfordscan/features.hpp"
#include "benfordscan/ingest.hpp"
#include "benfordscan/models.hpp"
#include "benfordscan/provider.hpp"
#include "benfordscan/synth.hpp"
#include "benfordscan/txgraph.hpp"

namespace benfordscan::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Global {
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  bool strict = false;
  bool print_config = false;
};

struct IngestOptions {
  std::string transactions;
  std::string labels;
  std::string format = "auto";
  std::string provider;
  std::string fixture;
  std::vector<std::string> addresses;
  std::string addresses_file;
  std::string host = "127.0.0.1";
  int port = 80;
  std::string path = "/transactions";
  int rate_limit_ms = 0;
  std::size_t page_limit = 100;
  int max_retries = 3;
  int retry_backoff_ms = 0;
};

struct DatasetOptions {
  std::string transactions;
  std::string labels;
  std::string format = "auto";
};

struct BenchOptions {
  std::string features;
  std::vector<std::string> models{"logreg", "dtree", "adaboost", "rforest", "gbdt"};
  bool ablation = true;
  double train_fraction = 0.64;
  double valid_fraction = 0.16;
  double test_fraction = 0.20;
  bool stratified = true;
  double threshold = 0.5;
};

struct PredictOptions {
  std::string model;
  std::string transactions;
  std::string format = "auto";
  std::vector<std::string> addresses;
  std::string addresses_file;
  std::string labels;
};

// ---------------------------------------------------------------------------
// File helpers

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return in;
}

void write_json(const fs::path& path, const json& j) { open_output(path) << j.dump(2) << '\n'; }

InputFormat resolve_format(const std::string& format, const fs::path& path) {
  if (format == "csv") return InputFormat::csv;
  if (format == "jsonl") return InputFormat::jsonl;
  const auto ext = path.extension().string();
  return ext == ".jsonl" || ext == ".ndjson" ? InputFormat::jsonl : InputFormat::csv;
}

std::string default_path(const std::string& given, const Global& g, const char* name) {
  return given.empty() ? (fs::path(g.out_dir) / name).string() : given;
}

std::vector<std::string> read_address_list(const std::vector<std::string>& inline_list, const std::string& file) {
  std::vector<std::string> out;
  for (const auto& a : inline_list) {
    if (!a.empty()) out.push_back(normalize_address(a));
  }
  if (!file.empty()) {
    auto in = open_input(file);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line == "address") continue;
      out.push_back(normalize_address(line.substr(0, line.find(','))));
    }
  }
  return out;
}

std::vector<TransactionRecord> load_records(const std::string& path, const std::string& format, bool strict,
                                            std::ostream& err) {
  auto in = open_input(path);
  const auto fmt = resolve_format(format, path);
  if (strict) return parse_transactions(in, fmt);
  auto parsed = parse_transactions_lenient(in, fmt);
  for (const auto& issue : parsed.issues) {
    err << "warning: " << path << ": skipped " << issue.message << "\n";
  }
  return std::move(parsed.records);
}

std::optional<LabelMap> load_optional_labels(const std::string& given, const Global& g, std::ostream& err) {
  const fs::path path = default_path(given, g, "labels.csv");
  if (!fs::exists(path)) {
    if (!given.empty()) throw Error("cannot read " + path.string());
    err << "warning: no labels file at " << path.string() << "\n";
    return std::nullopt;
  }
  auto in = open_input(path);
  return load_labels(in);
}

// ---------------------------------------------------------------------------
// ingest

void cmd_ingest(const Global& g, const IngestOptions& o, std::ostream& err) {
  const bool from_file = !o.transactions.empty();
  const bool from_provider = !o.provider.empty();
  if (from_file == from_provider) throw UsageError("ingest needs exactly one of --transactions or --provider");

  json summary;
  std::vector<TransactionRecord> records;
  std::vector<ParseIssue> issues;

  if (from_file) {
    auto in = open_input(o.transactions);
    const auto format = resolve_format(o.format, o.transactions);
    if (g.strict) {
      records = parse_transactions(in, format);
    } else {
      auto parsed = parse_transactions_lenient(in, format);
      records = std::move(parsed.records);
      issues = std::move(parsed.issues);
    }
    summary["source"] = o.transactions;
  } else {
    std::unique_ptr<ChainProvider> provider;
    std::vector<std::string> addresses = read_address_list(o.addresses, o.addresses_file);
    const std::chrono::milliseconds interval{o.rate_limit_ms};
    if (o.provider == "fixture") {
      if (o.fixture.empty()) throw UsageError("--provider fixture needs --fixture");
      auto document = [&] {
        auto in = open_input(o.fixture);
        return json::parse(in);
      }();
      auto fixture = std::make_unique<FixtureProvider>(document, interval);
      if (addresses.empty()) addresses = fixture->addresses();
      provider = std::move(fixture);
    } else if (o.provider == "http") {
      HttpProviderConfig config;
      config.host = o.host;
      config.port = o.port;
      config.path = o.path;
      config.min_request_interval = interval;
      provider = std::make_unique<HttpProvider>(config);
    } else {
      throw UsageError("unknown provider '" + o.provider + "' (expected fixture or http)");
    }
    if (addresses.empty()) throw UsageError("no addresses to fetch");

    FetchOptions fetch;
    fetch.page_limit = o.page_limit;
    fetch.max_retries = o.max_retries;
    fetch.retry_backoff = std::chrono::milliseconds{o.retry_backoff_ms};
    std::set<std::string> seen;
    json partial = json::array();
    for (const auto& address : addresses) {
      std::vector<TransactionRecord> history;
      try {
        history = fetch_address_history(*provider, address, fetch);
      } catch (const PartialDataError& e) {
        if (g.strict) throw;
        err << "warning: " << address << ": page limit reached with cursor " << e.remaining_cursor()
            << " remaining; keeping " << e.records().size() << " records\n";
        partial.push_back({{"address", address}, {"cursor", e.remaining_cursor()}});
        history = e.records();
      }
      for (auto& r : history) {
        if (seen.insert(r.tx_hash).second) records.push_back(std::move(r));
      }
    }
    summary["source"] = "provider:" + o.provider;
    summary["addresses_fetched"] = addresses.size();
    summary["partial_addresses"] = partial;
  }

  for (const auto& issue : issues) {
    err << "warning: " << o.transactions << ": skipped " << issue.message << "\n";
  }

  const fs::path out_dir = g.out_dir;
  {
    auto out = open_output(out_dir / "transactions.csv");
    write_transactions(out, records);
  }
  summary["records"] = records.size();
  summary["skipped"] = issues.size();
  json issue_list = json::array();
  for (const auto& issue : issues) {
    issue_list.push_back({{"line", issue.line}, {"field", issue.field}, {"message", issue.message}});
  }
  summary["issues"] = issue_list;
  summary["failed_transactions"] = "included";

  if (!o.labels.empty()) {
    auto in = open_input(o.labels);
    const auto labels = load_labels(in);
    auto out = open_output(out_dir / "labels.csv");
    write_labels(out, labels);
    const auto counts = count_labels(labels);
    summary["labels"] = {{"scam", counts.scam}, {"nonscam", counts.nonscam}};
  }
  write_json(out_dir / "ingest_summary.json", summary);
}

// ---------------------------------------------------------------------------
// synth

void cmd_synth(const Global& g, GeneratorConfig config, std::ostream& err) {
  config.seed = g.seed;
  const auto data = generate(config);
  const fs::path out_dir = g.out_dir;
  {
    auto out = open_output(out_dir / "transactions.csv");
    write_transactions(out, data.records);
  }
  {
    auto out = open_output(out_dir / "labels.csv");
    write_labels(out, data.labels);
  }

  json summary = {{"seed", config.seed},
                  {"n_legit", config.n_legit},
                  {"n_scam", config.n_scam},
                  {"tx_min", config.tx_min},
                  {"tx_max", config.tx_max},
                  {"legit_decades", config.legit_decades},
                  {"legit_min_exponent", config.legit_min_exponent},
                  {"exponent_jitter", config.exponent_jitter},
                  {"scam_decade", config.scam_decade},
                  {"match_statistics", config.match_statistics},
                  {"scam_round_fraction", config.scam_round_fraction},
                  {"scam_mimic_fraction", config.scam_mimic_fraction},
                  {"counterparty_pool", config.counterparty_pool},
                  {"records", data.records.size()}};

  std::size_t separated = 0;
  if (config.match_statistics && config.n_legit > 0 && config.n_scam > 0) {
    const auto examples = build_dataset(build_graph(data.records), data.labels);
    json tests = json::array();
    for (const auto& t : check_matched_statistics(examples)) {
      tests.push_back({{"feature", t.feature}, {"z", t.z}, {"separated", t.separated}});
      if (t.separated) {
        ++separated;
        err << "warning: feature " << t.feature << " separates the classes (z = " << format_double(t.z) << ")\n";
      }
    }
    summary["location_tests"] = tests;
  }
  write_json(out_dir / "synth_summary.json", summary);
  if (separated > 0 && g.strict) throw DataError("matched statistics check failed for " + std::to_string(separated) + " feature(s)");
}

// ---------------------------------------------------------------------------
// analyze

DigitTally tally_of(const AddressNeighborhood& n) {
  std::set<std::string_view> seen;
  DigitTally tally;
  for (const auto* list : {&n.incoming, &n.outgoing}) {
    for (const auto& r : *list) {
      if (seen.insert(r.tx_hash).second) tally.add(r.value);
    }
  }
  return tally;
}

void cmd_analyze(const Global& g, const DatasetOptions& o, std::ostream& err) {
  const auto records = load_records(default_path(o.transactions, g, "transactions.csv"), o.format, g.strict, err);
  const auto labels = load_optional_labels(o.labels, g, err);
  const auto graph = build_graph(records);
  const fs::path out_dir = g.out_dir;

  std::vector<std::string> addresses;
  if (labels) {
    for (const auto& [address, _] : *labels) addresses.push_back(address);
  } else {
    addresses.assign(graph.vertices().begin(), graph.vertices().end());
  }

  struct ClassAccumulator {
    std::set<std::string> hashes;
    DigitTally pooled;
    std::size_t addresses = 0;
    double chi2[2] = {0.0, 0.0};
    double ks[2] = {0.0, 0.0};
  };
  std::map<Label, ClassAccumulator> classes;

  auto fits = open_output(out_dir / "address_fits.csv");
  fits << "address,label,values,skipped,chi2_first,ks_first,chi2_second,ks_second\n";
  for (const auto& address : addresses) {
    const auto n = graph.neighborhood(address);
    const auto tally = tally_of(n);
    std::optional<Label> label;
    if (labels) label = labels->at(address).label;
    fits << address << ',' << (label ? std::string(to_string(*label)) : std::string(kMissingMarker)) << ','
         << tally.valid() << ',' << tally.skipped() << ',';
    if (tally.valid() == 0) {
      fits << "NA,NA,NA,NA\n";
      if (!n.edge_total() && labels) err << "warning: labeled address " << address << " has no transactions\n";
      continue;
    }
    const auto fit = fit_tally(tally);
    fits << format_double(fit.first.chi_squared) << ',' << format_double(fit.first.ks) << ','
         << format_double(fit.second.chi_squared) << ',' << format_double(fit.second.ks) << '\n';
    if (label) {
      auto& acc = classes[*label];
      ++acc.addresses;
      acc.chi2[0] += fit.first.chi_squared;
      acc.chi2[1] += fit.second.chi_squared;
      acc.ks[0] += fit.first.ks;
      acc.ks[1] += fit.second.ks;
      for (const auto* list : {&n.incoming, &n.outgoing}) {
        for (const auto& r : *list) {
          if (acc.hashes.insert(r.tx_hash).second) acc.pooled.add(r.value);
        }
      }
    }
  }

  if (!labels) {
    err << "warning: no labels; skipping aggregate distributions and class means\n";
    return;
  }

  auto means = open_output(out_dir / "class_means.csv");
  means << "label,position,addresses,mean_chi2,mean_ks\n";
  auto aggregate = open_output(out_dir / "aggregate_fits.csv");
  aggregate << "label,position,values,chi2,ks\n";
  for (const auto& [label, acc] : classes) {
    const auto name = std::string(to_string(label));
    for (const auto position : {DigitPosition::first, DigitPosition::second}) {
      const int k = position == DigitPosition::first ? 0 : 1;
      const auto pos = std::string(to_string(position));
      const double count = static_cast<double>(acc.addresses);
      means << name << ',' << pos << ',' << acc.addresses << ',' << format_double(acc.chi2[k] / count) << ','
            << format_double(acc.ks[k] / count) << '\n';

      const auto observed = acc.pooled.distribution(position);
      const auto expected = benford_expected(position);
      auto csv = open_output(out_dir / ("aggregate_" + name + "_" + pos + ".csv"));
      write_distribution_csv(csv, observed, expected);
      const auto fit = benford_fit(observed);
      aggregate << name << ',' << pos << ',' << acc.pooled.valid() << ',' << format_double(fit.chi_squared) << ','
                << format_double(fit.ks) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// features

void cmd_features(const Global& g, const DatasetOptions& o, std::ostream& err) {
  const auto records = load_records(default_path(o.transactions, g, "transactions.csv"), o.format, g.strict, err);
  const auto labels = load_optional_labels(o.labels, g, err);
  if (!labels) throw UsageError("features needs a labels file");
  std::vector<std::string> warnings;
  const auto examples = build_dataset(build_graph(records), *labels, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  auto out = open_output(fs::path(g.out_dir) / "features.csv");
  write_matrix(out, examples);
  if (g.strict && !warnings.empty()) throw DataError(std::to_string(warnings.size()) + " feature warning(s) under --strict");
}

// ---------------------------------------------------------------------------
// bench

void write_importances(const fs::path& path, const std::vector<std::pair<std::string, double>>& importances) {
  auto out = open_output(path);
  out << "feature,importance\n";
  for (const auto& [name, value] : importances) out << name << ',' << format_double(value) << '\n';
}

void write_arm(const fs::path& out_dir, ModelKind kind, const char* arm, const BenchArm& result) {
  const auto stem = std::string(to_string(kind)) + "_" + arm;
  {
    auto out = open_output(out_dir / "models" / (stem + ".json"));
    save_model(out, result.model);
  }
  write_json(out_dir / "reports" / (stem + ".json"), to_json(result.report));
  write_importances(out_dir / "importances" / (stem + ".csv"), result.report.importances);
}

void cmd_bench(const Global& g, const BenchOptions& o, const std::vector<ModelKind>& kinds) {
  const auto path = default_path(o.features, g, "features.csv");
  auto in = open_input(path);
  const auto examples = read_matrix(in);

  SplitSpec spec;
  spec.train_frac = o.train_fraction;
  spec.valid_frac = o.valid_fraction;
  spec.test_frac = o.test_fraction;
  spec.seed = g.seed;
  spec.stratified = o.stratified;
  TrainConfig config;
  config.seed = g.seed;
  config.threshold = o.threshold;

  const fs::path out_dir = g.out_dir;
  std::vector<AblationResult> results;
  for (const auto kind : kinds) {
    const std::vector<ModelKind> one{kind};
    try {
      if (o.ablation) {
        results.push_back(std::move(ablation(examples, spec, one, config).front()));
      } else {
        const auto parts = split(examples, spec);
        const auto columns = feature_columns(true);
        auto model = train(kind, design_matrix(parts.train, columns), design_matrix(parts.valid, columns), config);
        auto report = evaluate(model, design_matrix(parts.test, columns));
        write_arm(out_dir, kind, "with_benford", BenchArm{columns, std::move(model), std::move(report)});
        continue;
      }
    } catch (const Error& e) {
      throw Error(std::string(to_string(kind)) + ": " + e.what());
    }
    const auto& r = results.back();
    write_arm(out_dir, kind, "with_benford", r.with_benford);
    write_arm(out_dir, kind, "without_benford", r.without_benford);
  }
  if (o.ablation) {
    auto out = open_output(out_dir / "comparison.txt");
    write_comparison_table(out, results);
  }
}

// ---------------------------------------------------------------------------
// predict

void cmd_predict(const Global& g, const PredictOptions& o, std::ostream& err) {
  if (o.model.empty()) throw UsageError("predict needs --model");
  TrainedModel model = [&] {
    auto in = open_input(o.model);
    return load_model(in);
  }();
  for (const auto& name : model.feature_schema()) {
    if (!feature_index(name)) throw SchemaError("model feature '" + name + "' is not produced by feature extraction");
  }

  auto addresses = read_address_list(o.addresses, o.addresses_file);
  if (!o.labels.empty()) {
    auto in = open_input(o.labels);
    for (const auto& [address, _] : load_labels(in)) addresses.push_back(address);
  }
  if (addresses.empty()) throw UsageError("predict needs --address, --addresses-file or --labels");

  const auto records = load_records(default_path(o.transactions, g, "transactions.csv"), o.format, g.strict, err);
  const auto graph = build_graph(records);

  auto out = open_output(fs::path(g.out_dir) / "predictions.csv");
  out << "address,score,label,reason\n";
  for (const auto& address : addresses) {
    const auto n = graph.neighborhood(address);
    if (n.edge_total() == 0) {
      out << address << ",NA,NA,no transactions\n";
      continue;
    }
    const auto p = predict(model, extract_features(n));
    out << address << ',' << format_double(p.score) << ',' << (p.label == Label::scam ? "+1" : "-1") << ",\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benford digit analysis and scam-address classification for Ethereum transactions", "benfordscan"};
  app.set_version_flag("--version", "benfordscan 0.1.0");
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "Seed for every stochastic step")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
  app.add_flag("--strict", g.strict, "Treat warnings and skipped rows as errors");
  app.add_flag("--print-config", g.print_config, "Print the resolved configuration and exit")->configurable(false);
  app.set_config("--config", "", "Flat key=value configuration file");

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate transactions and labels into canonical files");
  ingest_cmd->add_option("--transactions", ingest.transactions, "Transactions file (CSV or JSONL)");
  ingest_cmd->add_option("--labels", ingest.labels, "Labels CSV");
  ingest_cmd->add_option("--format", ingest.format, "csv, jsonl or auto")
      ->check(CLI::IsMember({"auto", "csv", "jsonl"}))
      ->capture_default_str();
  ingest_cmd->add_option("--provider", ingest.provider, "fixture or http");
  ingest_cmd->add_option("--fixture", ingest.fixture, "Fixture provider JSON document");
  ingest_cmd->add_option("--address", ingest.addresses, "Address to fetch (repeatable)");
  ingest_cmd->add_option("--addresses-file", ingest.addresses_file, "File with one address per line");
  ingest_cmd->add_option("--host", ingest.host)->capture_default_str();
  ingest_cmd->add_option("--port", ingest.port)->capture_default_str();
  ingest_cmd->add_option("--path", ingest.path)->capture_default_str();
  ingest_cmd->add_option("--rate-limit-ms", ingest.rate_limit_ms, "Minimum spacing between requests")
      ->capture_default_str();
  ingest_cmd->add_option("--page-limit", ingest.page_limit)->check(CLI::PositiveNumber)->capture_default_str();
  ingest_cmd->add_option("--max-retries", ingest.max_retries)->check(CLI::NonNegativeNumber)->capture_default_str();
  ingest_cmd->add_option("--retry-backoff-ms", ingest.retry_backoff_ms)->capture_default_str();

  GeneratorConfig synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
  synth_cmd->add_option("--n-legit", synth.n_legit)->capture_default_str();
  synth_cmd->add_option("--n-scam", synth.n_scam)->capture_default_str();
  synth_cmd->add_option("--tx-min", synth.tx_min)->capture_default_str();
  synth_cmd->add_option("--tx-max", synth.tx_max)->capture_default_str();
  synth_cmd->add_option("--legit-decades", synth.legit_decades)->capture_default_str();
  synth_cmd->add_option("--legit-min-exponent", synth.legit_min_exponent)->capture_default_str();
  synth_cmd->add_option("--exponent-jitter", synth.exponent_jitter)->capture_default_str();
  synth_cmd->add_option("--scam-decade", synth.scam_decade)->capture_default_str();
  synth_cmd->add_flag("--match-statistics,!--no-match-statistics", synth.match_statistics)->default_str("true");
  synth_cmd->add_option("--scam-round-fraction", synth.scam_round_fraction)->capture_default_str();
  synth_cmd->add_option("--scam-mimic-fraction", synth.scam_mimic_fraction)->capture_default_str();
  synth_cmd->add_option("--counterparty-pool", synth.counterparty_pool)->capture_default_str();

  DatasetOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Per-address and per-class Benford fits");
  analyze_cmd->add_option("--transactions", analyze.transactions, "Defaults to <out-dir>/transactions.csv");
  analyze_cmd->add_option("--labels", analyze.labels, "Defaults to <out-dir>/labels.csv");
  analyze_cmd->add_option("--format", analyze.format)->check(CLI::IsMember({"auto", "csv", "jsonl"}))->capture_default_str();

  DatasetOptions features;
  auto* features_cmd = app.add_subcommand("features", "Build the address feature matrix");
  features_cmd->add_option("--transactions", features.transactions, "Defaults to <out-dir>/transactions.csv");
  features_cmd->add_option("--labels", features.labels, "Defaults to <out-dir>/labels.csv");
  features_cmd->add_option("--format", features.format)->check(CLI::IsMember({"auto", "csv", "jsonl"}))->capture_default_str();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Train and evaluate models with and without Benford features");
  bench_cmd->add_option("--features", bench.features, "Defaults to <out-dir>/features.csv");
  bench_cmd->add_option("--models", bench.models, "Model kinds")->delimiter(',')->capture_default_str();
  bench_cmd->add_flag("--ablation,!--no-ablation", bench.ablation)->default_str("true");
  bench_cmd->add_option("--train-fraction", bench.train_fraction)->capture_default_str();
  bench_cmd->add_option("--valid-fraction", bench.valid_fraction)->capture_default_str();
  bench_cmd->add_option("--test-fraction", bench.test_fraction)->capture_default_str();
  bench_cmd->add_flag("--stratified,!--no-stratified", bench.stratified)->default_str("true");
  bench_cmd->add_option("--threshold", bench.threshold)->capture_default_str();

  PredictOptions predict_opts;
  auto* predict_cmd = app.add_subcommand("predict", "Score addresses with a trained model");
  predict_cmd->add_option("--model", predict_opts.model, "Model JSON file");
  predict_cmd->add_option("--transactions", predict_opts.transactions, "Defaults to <out-dir>/transactions.csv");
  predict_cmd->add_option("--format", predict_opts.format)->check(CLI::IsMember({"auto", "csv", "jsonl"}))->capture_default_str();
  predict_cmd->add_option("--address", predict_opts.addresses, "Address to score (repeatable)");
  predict_cmd->add_option("--addresses-file", predict_opts.addresses_file, "File with one address per line");
  predict_cmd->add_option("--labels", predict_opts.labels, "Score every address in a labels CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (g.print_config) {
    out << app.config_to_str(true, false);
    return 0;
  }

  try {
    std::vector<ModelKind> kinds;
    if (bench_cmd->parsed()) {
      for (const auto& name : bench.models) {
        try {
          kinds.push_back(parse_model_kind(name));
        } catch (const std::invalid_argument&) {
          throw UsageError("unknown model kind '" + name + "'");
        }
      }
      if (kinds.empty()) throw UsageError("--models is empty");
    }

    if (ingest_cmd->parsed()) cmd_ingest(g, ingest, err);
    if (synth_cmd->parsed()) cmd_synth(g, synth, err);
    if (analyze_cmd->parsed()) cmd_analyze(g, analyze, err);
    if (features_cmd->parsed()) cmd_features(g, features, err);
    if (bench_cmd->parsed()) cmd_bench(g, bench, kinds);
    if (predict_cmd->parsed()) cmd_predict(g, predict_opts, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace benfordscan::cli
