#include <doctest.h>

#include <cmath>
#include <memory>
#include <set>

#include "benfordscan/error.hpp"
#include "benfordscan/estimators.hpp"
#include "benfordscan/models.hpp"
#include "benfordscan/random.hpp"
#include "support.hpp"

using namespace benfordscan;

namespace {

std::vector<LabeledExample> make_examples(std::size_t negatives, std::size_t positives) {
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < negatives + positives; ++i) {
    LabeledExample e;
    e.address = test_support::hash_of(i);
    e.label = i < negatives ? Label::nonscam : Label::scam;
    e.features.values[0] = static_cast<double>(i);
    out.push_back(e);
  }
  return out;
}

std::size_t positives(const std::vector<LabeledExample>& part) {
  return static_cast<std::size_t>(
      std::count_if(part.begin(), part.end(), [](const auto& e) { return e.label == Label::scam; }));
}

/// A one-split tree on its only input: x > 0.5 predicts scam.
TrainedModel echo_model() {
  std::vector<TreeNode> nodes(3);
  nodes[0].feature = 0;
  nodes[0].threshold = 0.5;
  nodes[0].left = 1;
  nodes[0].right = 2;
  nodes[1].value = 0.0;
  nodes[2].value = 1.0;
  auto state = std::make_shared<ModelState>(ModelState{DtreeState{DecisionTree(nodes)}});
  return TrainedModel(ModelKind::dtree, {"chi2_second"}, TrainConfig{}, state);
}

DesignMatrix predictions_as_matrix(const std::vector<Label>& truth, const std::vector<Label>& predicted) {
  DesignMatrix m;
  m.columns = {"chi2_second"};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    m.rows.push_back({predicted[i] == Label::scam ? 1.0 : 0.0});
    m.labels.push_back(truth[i]);
  }
  return m;
}

double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

}  // namespace

TEST_CASE("split sizes and stratification") {
  const auto examples = make_examples(92, 8);
  SplitSpec spec;
  spec.seed = 7;
  const auto parts = split(examples, spec);
  CHECK(parts.train.size() == 64);
  CHECK(parts.valid.size() == 16);
  CHECK(parts.test.size() == 20);
  CHECK(positives(parts.train) == 5);
  CHECK(positives(parts.valid) == 1);
  CHECK(positives(parts.test) == 2);

  std::set<std::string> seen;
  for (const auto* part : {&parts.train, &parts.valid, &parts.test}) {
    for (const auto& e : *part) CHECK(seen.insert(e.address).second);
  }
  CHECK(seen.size() == 100);
}

TEST_CASE("split is deterministic in the seed") {
  const auto examples = make_examples(92, 8);
  SplitSpec spec;
  spec.seed = 7;
  const auto a = split(examples, spec);
  const auto b = split(examples, spec);
  CHECK(a.train == b.train);
  CHECK(a.valid == b.valid);
  CHECK(a.test == b.test);
  spec.seed = 8;
  CHECK(split(examples, spec).test != a.test);
}

TEST_CASE("stratified class ratios on a large set") {
  const auto examples = make_examples(870, 130);
  SplitSpec spec;
  spec.seed = 3;
  const auto parts = split(examples, spec);
  for (const auto* part : {&parts.train, &parts.valid, &parts.test}) {
    const double ratio = static_cast<double>(positives(*part)) / static_cast<double>(part->size());
    CHECK(std::abs(ratio - 0.13) <= 0.02);
  }
}

TEST_CASE("a class that cannot reach every partition is a split error") {
  SplitSpec spec;
  CHECK_THROWS_AS(split(make_examples(50, 1), spec), SplitError);
  spec.stratified = false;
  CHECK_NOTHROW(split(make_examples(50, 1), spec));
  SplitSpec bad;
  bad.test_frac = 0.5;
  CHECK_THROWS_AS(split(make_examples(50, 10), bad), ContractError);
}

TEST_CASE("hand-computed confusion") {
  const auto r = metrics_from_confusion({3, 1, 1, 15});
  CHECK(r.scam.precision == doctest::Approx(0.75));
  CHECK(r.scam.recall == doctest::Approx(0.75));
  CHECK(r.nonscam.f1 == doctest::Approx(0.9375));
  CHECK(r.macro_f1 == doctest::Approx(0.84375).epsilon(1e-12));
  CHECK(r.accuracy == doctest::Approx(0.9));
}

TEST_CASE("degenerate classifiers") {
  const auto negative = metrics_from_confusion({0, 0, 8, 92});
  CHECK(negative.accuracy == doctest::Approx(0.92));
  CHECK(negative.balanced_accuracy == doctest::Approx(0.5));
  CHECK(negative.scam.recall == 0.0);
  CHECK(negative.scam.precision == 0.0);

  const auto perfect = metrics_from_confusion({8, 0, 0, 92});
  for (const double v : {perfect.macro_precision, perfect.macro_recall, perfect.macro_f1, perfect.balanced_accuracy,
                         perfect.accuracy}) {
    CHECK(v == 1.0);
  }
}

TEST_CASE("evaluate agrees with recomputation from the confusion matrix") {
  const auto model = echo_model();
  Rng rng(50);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 1 + rng.below(200);
    std::vector<Label> truth, predicted;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    const double base = rng.uniform();
    for (std::uint64_t i = 0; i < n; ++i) {
      const bool t = rng.bernoulli(base);
      const bool p = rng.bernoulli(0.5);
      truth.push_back(t ? Label::scam : Label::nonscam);
      predicted.push_back(p ? Label::scam : Label::nonscam);
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
      tn += !t && !p;
    }
    const auto report = evaluate(model, predictions_as_matrix(truth, predicted));
    CHECK(report.confusion == ConfusionMatrix{tp, fp, fn, tn});
    CHECK(report.confusion.total() == n);

    const double f1_pos = safe_div(2.0 * tp, 2.0 * tp + fp + fn);
    const double f1_neg = safe_div(2.0 * tn, 2.0 * tn + fn + fp);
    const double rec_pos = safe_div(tp, tp + fn);
    const double rec_neg = safe_div(tn, tn + fp);
    const double prec_pos = safe_div(tp, tp + fp);
    const double prec_neg = safe_div(tn, tn + fn);
    CHECK(report.macro_f1 == doctest::Approx((f1_pos + f1_neg) / 2).epsilon(1e-12));
    CHECK(report.balanced_accuracy == doctest::Approx((rec_pos + rec_neg) / 2).epsilon(1e-12));
    CHECK(report.macro_precision == doctest::Approx((prec_pos + prec_neg) / 2).epsilon(1e-12));
    CHECK(report.accuracy == doctest::Approx(static_cast<double>(tp + tn) / static_cast<double>(n)).epsilon(1e-12));
    for (const double v : {report.macro_f1, report.balanced_accuracy, report.accuracy, report.macro_precision}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("confusion rejects length mismatch") {
  const std::vector<Label> a{Label::scam}, b;
  CHECK_THROWS_AS(confusion(a, b), ContractError);
}
