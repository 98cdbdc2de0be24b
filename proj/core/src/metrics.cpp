#include <nlohmann/json.hpp>

#include "benfordscan/error.hpp"
#include "benfordscan/models.hpp"

namespace benfordscan {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics class_metrics(std::size_t hit, std::size_t false_alarm, std::size_t miss) {
  ClassMetrics m;
  m.precision = ratio(hit, hit + false_alarm);
  m.recall = ratio(hit, hit + miss);
  m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.support = hit + miss;
  return m;
}

nlohmann::json class_json(const ClassMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
}

}  // namespace

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) {
    throw ContractError("truth and prediction lengths differ");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] == Label::scam;
    const bool flagged = predicted[i] == Label::scam;
    if (actual && flagged) ++cm.tp;
    else if (!actual && flagged) ++cm.fp;
    else if (actual) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

EvalReport metrics_from_confusion(const ConfusionMatrix& cm) {
  EvalReport r;
  r.confusion = cm;
  r.scam = class_metrics(cm.tp, cm.fp, cm.fn);
  r.nonscam = class_metrics(cm.tn, cm.fn, cm.fp);
  r.macro_precision = 0.5 * (r.scam.precision + r.nonscam.precision);
  r.macro_recall = 0.5 * (r.scam.recall + r.nonscam.recall);
  r.macro_f1 = 0.5 * (r.scam.f1 + r.nonscam.f1);
  r.balanced_accuracy = r.macro_recall;
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  return r;
}

EvalReport evaluate(const TrainedModel& model, const DesignMatrix& test_set) {
  if (test_set.size() == 0) {
    throw ContractError("evaluation needs a non-empty test set");
  }
  if (test_set.columns != model.feature_schema()) {
    throw ContractError("test set columns do not match the model's feature schema");
  }
  std::vector<Label> predicted;
  predicted.reserve(test_set.size());
  for (const auto& row : test_set.rows) predicted.push_back(predict(model, row).label);
  auto report = metrics_from_confusion(confusion(test_set.labels, predicted));
  report.importances = feature_importance(model);
  return report;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json importances = nlohmann::json::array();
  for (const auto& [name, weight] : r.importances) importances.push_back({{"feature", name}, {"importance", weight}});
  return {{"per_class", {{"scam", class_json(r.scam)}, {"nonscam", class_json(r.nonscam)}}},
          {"macro_precision", r.macro_precision},
          {"macro_recall", r.macro_recall},
          {"macro_f1", r.macro_f1},
          {"balanced_accuracy", r.balanced_accuracy},
          {"accuracy", r.accuracy},
          {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}}},
          {"importances", importances}};
}

}  // namespace benfordscan
