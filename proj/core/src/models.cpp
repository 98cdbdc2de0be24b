#include "benfordscan/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "benfordscan/error.hpp"
#include "benfordscan/estimators.hpp"
#include "estimators_impl.hpp"

namespace benfordscan {

namespace {

using nlohmann::json;

constexpr std::string_view kModelFormat = "benfordscan-model";
constexpr int kModelVersion = 1;

void check_matrix(const DesignMatrix& m, const char* what) {
  if (m.labels.size() != m.rows.size()) {
    throw ContractError(std::string(what) + ": label count does not match row count");
  }
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    if (m.rows[r].size() != m.columns.size()) {
      throw ContractError(std::string(what) + ": row " + std::to_string(r) + " width does not match the columns");
    }
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
      if (std::isinf(m.rows[r][c])) {
        throw DataError(std::string(what) + ": non-finite value in column " + m.columns[c] + " at row " +
                        std::to_string(r));
      }
    }
  }
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::logreg: return "logreg";
    case ModelKind::dtree: return "dtree";
    case ModelKind::adaboost: return "adaboost";
    case ModelKind::rforest: return "rforest";
    case ModelKind::gbdt: return "gbdt";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (const auto kind : kAllModelKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown model kind '" + std::string(name) +
                              "' (expected logreg, dtree, adaboost, rforest or gbdt)");
}

std::vector<std::string> feature_columns(bool with_benford) {
  std::vector<std::string> columns;
  for (const auto name : kFeatureNames) {
    if (with_benford || !is_benford_feature(name)) columns.emplace_back(name);
  }
  return columns;
}

DesignMatrix design_matrix(std::span<const LabeledExample> examples, std::span<const std::string> columns) {
  std::vector<std::size_t> index;
  for (const auto& c : columns) {
    const auto i = feature_index(c);
    if (!i) throw SchemaError("unknown feature column '" + c + "'");
    index.push_back(*i);
  }
  DesignMatrix m;
  m.columns.assign(columns.begin(), columns.end());
  for (const auto& ex : examples) {
    std::vector<double> row;
    row.reserve(index.size());
    for (const auto i : index) row.push_back(ex.features.values[i].value_or(std::numeric_limits<double>::quiet_NaN()));
    m.rows.push_back(std::move(row));
    m.labels.push_back(ex.label);
  }
  return m;
}

json to_json(const TrainConfig& c) {
  return {{"seed", c.seed},
          {"balanced_class_weights", c.balanced_class_weights},
          {"threshold", c.threshold},
          {"logreg", {{"l2", c.logreg.l2}, {"max_iterations", c.logreg.max_iterations}, {"tolerance", c.logreg.tolerance}}},
          {"dtree", {{"max_depth", c.dtree.max_depth}, {"min_samples_leaf", c.dtree.min_samples_leaf}}},
          {"adaboost",
           {{"rounds", c.adaboost.rounds},
            {"max_depth", c.adaboost.max_depth},
            {"learning_rate", c.adaboost.learning_rate},
            {"patience", c.adaboost.patience}}},
          {"rforest",
           {{"trees", c.rforest.trees}, {"max_depth", c.rforest.max_depth}, {"min_samples_leaf", c.rforest.min_samples_leaf}}},
          {"gbdt",
           {{"rounds", c.gbdt.rounds},
            {"max_depth", c.gbdt.max_depth},
            {"learning_rate", c.gbdt.learning_rate},
            {"l2", c.gbdt.l2},
            {"min_samples_leaf", c.gbdt.min_samples_leaf},
            {"min_child_hessian", c.gbdt.min_child_hessian},
            {"patience", c.gbdt.patience}}}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.balanced_class_weights = j.at("balanced_class_weights").get<bool>();
  c.threshold = j.at("threshold").get<double>();
  const auto& lr = j.at("logreg");
  c.logreg = {lr.at("l2").get<double>(), lr.at("max_iterations").get<int>(), lr.at("tolerance").get<double>()};
  const auto& dt = j.at("dtree");
  c.dtree = {dt.at("max_depth").get<int>(), dt.at("min_samples_leaf").get<std::size_t>()};
  const auto& ab = j.at("adaboost");
  c.adaboost = {ab.at("rounds").get<int>(), ab.at("max_depth").get<int>(), ab.at("learning_rate").get<double>(),
                ab.at("patience").get<int>()};
  const auto& rf = j.at("rforest");
  c.rforest = {rf.at("trees").get<int>(), rf.at("max_depth").get<int>(), rf.at("min_samples_leaf").get<std::size_t>()};
  const auto& gb = j.at("gbdt");
  c.gbdt = {gb.at("rounds").get<int>(),           gb.at("max_depth").get<int>(),
            gb.at("learning_rate").get<double>(), gb.at("l2").get<double>(),
            gb.at("min_samples_leaf").get<std::size_t>(), gb.at("min_child_hessian").get<double>(),
            gb.at("patience").get<int>()};
  return c;
}

TrainedModel::TrainedModel(ModelKind kind, std::vector<std::string> schema, TrainConfig config,
                           std::shared_ptr<const ModelState> state)
    : kind_(kind), schema_(std::move(schema)), config_(std::move(config)), state_(std::move(state)) {}

double TrainedModel::score(std::span<const double> x) const {
  if (x.size() != schema_.size()) {
    throw ContractError("feature vector has " + std::to_string(x.size()) + " values; model expects " +
                        std::to_string(schema_.size()));
  }
  return detail::score(*state_, x);
}

std::vector<double> TrainedModel::raw_importances() const { return detail::raw_importances(*state_, schema_.size()); }

json TrainedModel::to_json() const {
  return {{"format", kModelFormat},
          {"version", kModelVersion},
          {"kind", to_string(kind_)},
          {"feature_schema", schema_},
          {"train_config", benfordscan::to_json(config_)},
          {"state", detail::state_to_json(*state_)}};
}

TrainedModel TrainedModel::from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw SchemaError("not a benfordscan model file");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw SchemaError("unsupported model file version " + j.at("version").dump());
    }
    const auto kind = parse_model_kind(j.at("kind").get<std::string>());
    auto schema = j.at("feature_schema").get<std::vector<std::string>>();
    auto state = std::make_shared<ModelState>(detail::state_from_json(kind, j.at("state")));
    return TrainedModel(kind, std::move(schema), train_config_from_json(j.at("train_config")), std::move(state));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  }
}

TrainedModel train(ModelKind kind, const DesignMatrix& train_set, const DesignMatrix& valid_set,
                   const TrainConfig& config) {
  check_matrix(train_set, "training set");
  if (valid_set.size() > 0) {
    check_matrix(valid_set, "validation set");
    if (valid_set.columns != train_set.columns) {
      throw ContractError("validation columns differ from training columns");
    }
  }
  const auto n = train_set.size();
  const auto n_pos = static_cast<std::size_t>(std::count(train_set.labels.begin(), train_set.labels.end(), Label::scam));
  if (n == 0 || n_pos == 0 || n_pos == n) {
    throw TrainingError(std::string(to_string(kind)) + ": training set needs both classes (" + std::to_string(n_pos) +
                        " scam of " + std::to_string(n) + ")");
  }

  detail::ClassWeights weights;
  if (config.balanced_class_weights) {
    weights.positive = static_cast<double>(n) / (2.0 * static_cast<double>(n_pos));
    weights.negative = static_cast<double>(n) / (2.0 * static_cast<double>(n - n_pos));
  }
  const auto train_data = detail::make_fit_data(train_set, weights);
  DesignMatrix empty{train_set.columns, {}, {}};
  const auto valid_data = detail::make_fit_data(valid_set.size() > 0 ? valid_set : empty, weights);

  auto state = std::make_shared<ModelState>();
  switch (kind) {
    case ModelKind::logreg: state->params = detail::fit_logistic(train_data, config.logreg); break;
    case ModelKind::dtree: state->params = detail::fit_dtree(train_data, config.dtree); break;
    case ModelKind::adaboost: state->params = detail::fit_adaboost(train_data, valid_data, config.adaboost); break;
    case ModelKind::rforest: state->params = detail::fit_forest(train_data, config.rforest, config.seed); break;
    case ModelKind::gbdt: state->params = detail::fit_gbdt(train_data, valid_data, config.gbdt); break;
  }
  return TrainedModel(kind, train_set.columns, config, std::move(state));
}

Prediction predict(const TrainedModel& model, std::span<const double> x) {
  const double s = std::clamp(model.score(x), 0.0, 1.0);
  return {s >= model.config().threshold ? Label::scam : Label::nonscam, s};
}

Prediction predict(const TrainedModel& model, const FeatureVector& features) {
  std::vector<double> x;
  for (const auto& name : model.feature_schema()) {
    const auto i = feature_index(name);
    if (!i) throw SchemaError("model schema names unknown feature '" + name + "'");
    x.push_back(features.values[*i].value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  return predict(model, x);
}

std::vector<std::pair<std::string, double>> feature_importance(const TrainedModel& model) {
  const auto& schema = model.feature_schema();
  auto raw = model.raw_importances();
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  for (double& v : raw) v = total > 0.0 ? v / total : 1.0 / static_cast<double>(raw.size());

  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] > raw[b]; });

  std::vector<std::pair<std::string, double>> ranked;
  for (const auto i : order) ranked.emplace_back(schema[i], raw[i]);
  return ranked;
}

void save_model(std::ostream& out, const TrainedModel& model) { out << model.to_json().dump(2) << '\n'; }

TrainedModel load_model(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  return TrainedModel::from_json(j);
}

std::vector<AblationResult> ablation(std::span<const LabeledExample> examples, const SplitSpec& spec,
                                     std::span<const ModelKind> kinds, const TrainConfig& config) {
  const auto parts = split(examples, spec);
  std::vector<AblationResult> results;
  for (const auto kind : kinds) {
    auto run_arm = [&](bool with_benford) {
      const auto columns = feature_columns(with_benford);
      const auto tr = design_matrix(parts.train, columns);
      const auto va = design_matrix(parts.valid, columns);
      const auto te = design_matrix(parts.test, columns);
      auto model = train(kind, tr, va, config);
      auto report = evaluate(model, te);
      return BenchArm{columns, std::move(model), std::move(report)};
    };
    auto with_arm = run_arm(true);
    auto without_arm = run_arm(false);
    results.push_back({kind, std::move(with_arm), std::move(without_arm)});
  }
  return results;
}

void write_comparison_table(std::ostream& out, std::span<const AblationResult> results) {
  struct Row {
    const char* name;
    double EvalReport::*field;
  };
  const Row rows[] = {{"Macro Avg Precision", &EvalReport::macro_precision},
                      {"Macro Avg Recall", &EvalReport::macro_recall},
                      {"Macro Avg F1-Score", &EvalReport::macro_f1},
                      {"Balanced Accuracy", &EvalReport::balanced_accuracy},
                      {"Accuracy", &EvalReport::accuracy}};

  auto block = [&](const char* title, const BenchArm AblationResult::*arm) {
    out << title << '\n';
    char cell[64];
    std::snprintf(cell, sizeof cell, "%-22s", "metric");
    out << cell;
    for (const auto& r : results) {
      std::snprintf(cell, sizeof cell, "%10s", std::string(to_string(r.kind)).c_str());
      out << cell;
    }
    out << '\n';
    for (const auto& row : rows) {
      std::snprintf(cell, sizeof cell, "%-22s", row.name);
      out << cell;
      for (const auto& r : results) {
        std::snprintf(cell, sizeof cell, "%10s", fixed4((r.*arm).report.*(row.field)).c_str());
        out << cell;
      }
      out << '\n';
    }
  };
  block("[without Benford features]", &AblationResult::without_benford);
  out << '\n';
  block("[with Benford features]", &AblationResult::with_benford);
}

}  // namespace benfordscan
