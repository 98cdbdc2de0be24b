// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "benfordscan/benford.hpp"
#include "benfordscan/error.hpp"
#include "benfordscan/estimators.hpp"
#include "benfordscan/features.hpp"
#include "benfordscan/models.hpp"
#include "benfordscan/random.hpp"
#include "benfordscan/synth.hpp"
#include "benfordscan/txgraph.hpp"

using namespace benfordscan;
using P = DigitPosition;

namespace {

// Independent 30-digit evaluations, frozen before the implementation.
constexpr double kSecondDigitZero = 0.11967926859688077;
constexpr double kUniformFirstChi2 = 0.401698292912180;
constexpr double kUniformFirstKs = 0.268726657994629;
constexpr std::uint64_t kSeed = 42;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

DigitDistribution uniform(P p) {
  const auto n = support_size(p);
  return DigitDistribution(p, std::vector<double>(n, 1.0 / static_cast<double>(n)), 1);
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto first = benford_expected(P::first);
  const auto second = benford_expected(P::second);
  double s1 = 0.0, s2 = 0.0;
  for (const double m : first.mass()) s1 += m;
  for (const double m : second.mass()) s2 += m;

  // The nine-term sum for second digit 0, evaluated here directly.
  double nine_term = 0.0;
  for (int d1 = 1; d1 <= 9; ++d1) nine_term += std::log10(1.0 + 1.0 / (10.0 * d1));

  o.require(std::abs(first.at(1) - 0.30103) <= 1e-5, "P(first=1) = " + num(first.at(1)));
  o.require(std::abs(s1 - 1.0) <= 1e-12, "first-digit mass sums to " + num(s1));
  o.require(std::abs(s2 - 1.0) <= 1e-12, "second-digit mass sums to " + num(s2));
  o.require(std::abs(second.at(0) - nine_term) <= 1e-5, "P(second=0) vs nine-term sum");
  o.require(std::abs(second.at(0) - kSecondDigitZero) <= 1e-5, "P(second=0) vs frozen value");
  o.note("P(1)=" + num(first.at(1)) + " P2(0)=" + num(second.at(0)));
  return o;
}

Outcome criterion2() {
  Outcome o;
  Rng rng(20);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = trial % 2 ? P::second : P::first;
    std::vector<double> mass(support_size(p));
    double total = 0.0;
    for (auto& m : mass) total += (m = rng.uniform());
    for (auto& m : mass) m /= total;
    const DigitDistribution observed(p, mass, 1);
    const auto expected = benford_expected(p);

    double chi2 = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) chi2 += mass[i] * mass[i] / expected.mass()[i];
    chi2 -= 1.0;
    double ks = 0.0;
    for (std::size_t k = 0; k < mass.size(); ++k) {
      double co = 0.0, ce = 0.0;
      for (std::size_t i = 0; i <= k; ++i) {
        co += mass[i];
        ce += expected.mass()[i];
      }
      ks = std::max(ks, std::abs(co - ce));
    }
    worst = std::max({worst, std::abs(chi_squared(observed, expected) - chi2),
                      std::abs(ks_statistic(observed, expected) - ks)});
  }
  o.require(worst <= 1e-9, "max deviation from reference " + num(worst));

  const double chi2 = chi_squared(uniform(P::first), benford_expected(P::first));
  const double ks = ks_statistic(uniform(P::first), benford_expected(P::first));
  o.require(std::abs(chi2 - 0.4017) <= 1e-4 && std::abs(chi2 - kUniformFirstChi2) <= 1e-9,
            "uniform chi2 = " + num(chi2));
  o.require(std::abs(ks - 0.26873) <= 1e-5 && std::abs(ks - kUniformFirstKs) <= 1e-9, "uniform KS = " + num(ks));
  o.note("uniform chi2=" + num(chi2) + " KS=" + num(ks) + " max ref dev=" + num(worst));
  return o;
}

Outcome criterion3() {
  Outcome o;
  Rng rng(30);
  std::size_t scale_failures = 0, trailing_failures = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string digits(1, static_cast<char>('1' + rng.below(9)));
    for (auto n = rng.below(25); n > 0; --n) digits.push_back(static_cast<char>('0' + rng.below(10)));
    const auto k = rng.below(30);
    const auto v = WeiAmount::parse(digits);
    const auto scaled = WeiAmount::parse(digits + std::string(k, '0'));
    for (const auto p : {P::first, P::second}) {
      if (significant_digit(v, p) != significant_digit(scaled, p)) ++scale_failures;
    }
    const auto round = WeiAmount::parse(digits.substr(0, 1) + std::string(k, '0'));
    if (significant_digit(round, P::second) != 0) ++trailing_failures;
  }
  bool zero_rejected = false;
  try {
    significant_digit(WeiAmount::parse("0"), P::first);
  } catch (const NoSignificantDigitError&) {
    zero_rejected = true;
  }
  o.require(scale_failures == 0, std::to_string(scale_failures) + " scale-invariance violations");
  o.require(trailing_failures == 0, std::to_string(trailing_failures) + " trailing-zero violations");
  o.require(zero_rejected, "zero accepted");
  o.note("10000 values checked");
  return o;
}

double pooled_chi2_first(const SyntheticDataset& d) {
  DigitTally tally;
  for (const auto& r : d.records) tally.add(r.value);
  return fit_tally(tally).first.chi_squared;
}

Outcome criterion4() {
  Outcome o;
  GeneratorConfig legit;
  legit.n_legit = 1;
  legit.n_scam = 0;
  legit.tx_min = legit.tx_max = 100000;
  legit.seed = kSeed;
  const double legit_chi2 = pooled_chi2_first(generate(legit));

  GeneratorConfig scam;
  scam.n_legit = 0;
  scam.n_scam = 1;
  scam.tx_min = scam.tx_max = 10000;
  scam.seed = kSeed;
  const double scam_chi2 = pooled_chi2_first(generate(scam));

  o.require(legit_chi2 < 1e-3, "legit chi2_first = " + num(legit_chi2));
  o.require(std::abs(scam_chi2 - 0.4017) <= 0.05, "scam chi2_first = " + num(scam_chi2));
  o.note("legit chi2_first=" + num(legit_chi2) + " scam chi2_first=" + num(scam_chi2));
  return o;
}

std::vector<LabeledExample> synthetic_dataset() {
  GeneratorConfig c;
  c.n_legit = 200;
  c.n_scam = 20;
  c.tx_min = 100;
  c.tx_max = 2000;
  c.match_statistics = true;
  c.seed = kSeed;
  const auto data = generate(c);
  return build_dataset(build_graph(data.records), data.labels);
}

Outcome criterion5(const std::vector<LabeledExample>& examples) {
  Outcome o;
  double sum[2][2] = {};
  double count[2] = {};
  for (const auto& e : examples) {
    const int c = e.label == Label::scam ? 1 : 0;
    sum[c][0] += *e.features.get("chi2_first");
    sum[c][1] += *e.features.get("chi2_second");
    count[c] += 1.0;
  }
  const double legit1 = sum[0][0] / count[0], scam1 = sum[1][0] / count[1];
  const double legit2 = sum[0][1] / count[0], scam2 = sum[1][1] / count[1];
  o.require(scam1 > legit1, "first digit: scam mean not above legit");
  o.require(scam2 > legit2, "second digit: scam mean not above legit");
  o.note("mean chi2 first scam/legit=" + num(scam1) + "/" + num(legit1) + " second scam/legit=" + num(scam2) + "/" +
         num(legit2));
  return o;
}

struct Ablation {
  AblationResult result;
};

Ablation run_gbdt_ablation(const std::vector<LabeledExample>& examples) {
  SplitSpec spec;
  spec.seed = kSeed;
  TrainConfig config;
  config.seed = kSeed;
  const std::vector<ModelKind> kinds{ModelKind::gbdt};
  return {ablation(examples, spec, kinds, config).front()};
}

Outcome criterion6(const Ablation& a) {
  Outcome o;
  const auto& with = a.result.with_benford.report;
  const auto& without = a.result.without_benford.report;
  o.require(with.balanced_accuracy >= 0.90, "with-arm balanced accuracy " + num(with.balanced_accuracy));
  o.require(with.macro_f1 >= 0.90, "with-arm macro-F1 " + num(with.macro_f1));
  o.require(without.balanced_accuracy <= 0.65, "without-arm balanced accuracy " + num(without.balanced_accuracy));
  o.require(with.balanced_accuracy - without.balanced_accuracy >= 0.25, "margin below 0.25");
  o.note("with BA=" + num(with.balanced_accuracy) + " F1=" + num(with.macro_f1) +
         ", without BA=" + num(without.balanced_accuracy));
  return o;
}

Outcome criterion7(const Ablation& a) {
  Outcome o;
  const auto importances = feature_importance(a.result.with_benford.model);
  std::size_t rank = importances.size();
  for (std::size_t i = 0; i < importances.size(); ++i) {
    if (importances[i].first == "chi2_second") rank = i;
  }
  o.require(rank < 2, "chi2_second rank " + std::to_string(rank + 1));
  o.note("top features: " + importances[0].first + " (" + num(importances[0].second) + "), " + importances[1].first +
         " (" + num(importances[1].second) + ")");
  return o;
}

TrainedModel echo_model() {
  std::vector<TreeNode> nodes(3);
  nodes[0].feature = 0;
  nodes[0].threshold = 0.5;
  nodes[0].left = 1;
  nodes[0].right = 2;
  nodes[1].value = 0.0;
  nodes[2].value = 1.0;
  auto state = std::make_shared<ModelState>(ModelState{DtreeState{DecisionTree(nodes)}});
  return TrainedModel(ModelKind::dtree, {"x"}, TrainConfig{}, state);
}

Outcome criterion8() {
  Outcome o;
  const auto model = echo_model();
  Rng rng(80);
  auto safe = [](double a, double b) { return b == 0.0 ? 0.0 : a / b; };
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    DesignMatrix m;
    m.columns = {"x"};
    double tp = 0, fp = 0, fn = 0, tn = 0;
    const auto n = 1 + rng.below(300);
    const double base = rng.uniform();
    for (std::uint64_t i = 0; i < n; ++i) {
      const bool truth = rng.bernoulli(base), pred = rng.bernoulli(0.5);
      m.rows.push_back({pred ? 1.0 : 0.0});
      m.labels.push_back(truth ? Label::scam : Label::nonscam);
      tp += truth && pred;
      fp += !truth && pred;
      fn += truth && !pred;
      tn += !truth && !pred;
    }
    const auto r = evaluate(model, m);
    const double f1 = (safe(2 * tp, 2 * tp + fp + fn) + safe(2 * tn, 2 * tn + fp + fn)) / 2;
    const double ba = (safe(tp, tp + fn) + safe(tn, tn + fp)) / 2;
    const double prec = (safe(tp, tp + fp) + safe(tn, tn + fn)) / 2;
    const double acc = (tp + tn) / static_cast<double>(n);
    worst = std::max({worst, std::abs(r.macro_f1 - f1), std::abs(r.balanced_accuracy - ba),
                      std::abs(r.macro_precision - prec), std::abs(r.accuracy - acc), std::abs(r.macro_recall - ba)});
  }
  o.require(worst <= 1e-12, "metric deviation " + num(worst));

  DesignMatrix degenerate;
  degenerate.columns = {"x"};
  for (int i = 0; i < 100; ++i) {
    degenerate.rows.push_back({0.0});
    degenerate.labels.push_back(i < 92 ? Label::nonscam : Label::scam);
  }
  const auto d = evaluate(model, degenerate);
  o.require(std::abs(d.accuracy - 0.92) <= 1e-12, "degenerate accuracy " + num(d.accuracy));
  o.require(std::abs(d.balanced_accuracy - 0.5) <= 1e-12, "degenerate balanced accuracy " + num(d.balanced_accuracy));

  std::vector<LabeledExample> examples(100);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    examples[i].address = std::to_string(i);
    examples[i].label = i < 92 ? Label::nonscam : Label::scam;
  }
  SplitSpec spec;
  spec.seed = 7;
  const auto parts = split(examples, spec);
  o.require(parts.train.size() == 64 && parts.valid.size() == 16 && parts.test.size() == 20, "partition sizes");
  for (const auto* part : {&parts.train, &parts.valid, &parts.test}) {
    const auto pos = std::count_if(part->begin(), part->end(), [](const auto& e) { return e.label == Label::scam; });
    o.require(pos > 0 && pos < static_cast<long>(part->size()), "both classes in every partition");
  }
  o.note("50 prediction sets, max deviation " + num(worst) + "; sizes " + std::to_string(parts.train.size()) + "/" +
         std::to_string(parts.valid.size()) + "/" + std::to_string(parts.test.size()));
  return o;
}

/// synth -> canonical CSV -> parse -> features -> bench, returning every
/// artifact as bytes.
std::vector<std::string> pipeline_bytes() {
  GeneratorConfig c;
  c.seed = kSeed;
  const auto data = generate(c);
  std::stringstream tx, labels;
  write_transactions(tx, data.records);
  write_labels(labels, data.labels);
  std::vector<std::string> artifacts{tx.str(), labels.str()};

  const auto records = parse_transactions(tx, InputFormat::csv);
  const auto label_map = load_labels(labels);
  const auto examples = build_dataset(build_graph(records), label_map);
  std::stringstream matrix;
  write_matrix(matrix, examples);
  artifacts.push_back(matrix.str());

  const auto reread = read_matrix(matrix);
  SplitSpec spec;
  spec.seed = kSeed;
  TrainConfig config;
  config.seed = kSeed;
  const auto results = ablation(reread, spec, kAllModelKinds, config);
  for (const auto& r : results) {
    for (const auto* arm : {&r.with_benford, &r.without_benford}) {
      std::ostringstream model;
      save_model(model, arm->model);
      artifacts.push_back(model.str());
      artifacts.push_back(to_json(arm->report).dump(2));
    }
  }
  std::ostringstream table;
  write_comparison_table(table, results);
  artifacts.push_back(table.str());
  return artifacts;
}

Outcome criterion9() {
  Outcome o;
  const auto a = pipeline_bytes();
  const auto b = pipeline_bytes();
  o.require(a.size() == b.size(), "artifact count differs");
  std::size_t differing = 0, bytes = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    differing += a[i] != b[i];
    bytes += a[i].size();
  }
  o.require(differing == 0, std::to_string(differing) + " artifacts differ");
  o.note(std::to_string(a.size()) + " artifacts, " + std::to_string(bytes) + " bytes compared");
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d [%s] %s: %s (%.2fs)\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, "expected digit laws", criterion1);
  report(2, "fit statistic oracles", criterion2);
  report(3, "digit extraction properties", criterion3);
  report(4, "generator consistency", criterion4);

  std::vector<LabeledExample> examples;
  std::optional<Ablation> ablation_run;
  report(5, "class-mean chi2 ordering", [&] {
    examples = synthetic_dataset();
    return criterion5(examples);
  });
  report(6, "with/without Benford ablation", [&] {
    ablation_run = run_gbdt_ablation(examples);
    return criterion6(*ablation_run);
  });
  report(7, "chi2_second importance rank", [&] {
    if (!ablation_run) throw Error("ablation did not run");
    return criterion7(*ablation_run);
  });
  report(8, "metric and split correctness", criterion8);
  report(9, "pipeline determinism", criterion9);

  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
