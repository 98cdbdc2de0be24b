#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "benfordscan/features.hpp"
#include "benfordscan/ingest.hpp"

namespace benfordscan {

enum class ModelKind { logreg, dtree, adaboost, rforest, gbdt };

inline constexpr std::array<ModelKind, 5> kAllModelKinds = {ModelKind::logreg, ModelKind::dtree, ModelKind::adaboost,
                                                            ModelKind::rforest, ModelKind::gbdt};

std::string_view to_string(ModelKind kind);
/// Throws std::invalid_argument for an unknown name.
ModelKind parse_model_kind(std::string_view name);

// ---------------------------------------------------------------------------
// Splitting

struct SplitSpec {
  double train_frac = 0.64;
  double valid_frac = 0.16;
  double test_frac = 0.20;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct DataSplit {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> valid;
  std::vector<LabeledExample> test;
};

/// Deterministic (stratified by default) partition. Partition sizes are
/// round(n * valid_frac) and round(n * test_frac) with training taking the
/// rest; each class is apportioned by largest remainder. Each partition keeps
/// the input order of its members.
///
/// Throws SplitError when a stratified partition would miss a class.
DataSplit split(std::span<const LabeledExample> examples, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Training data

/// Row-major features with NaN for missing values.
struct DesignMatrix {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;

  std::size_t size() const noexcept { return rows.size(); }
};

/// Canonical feature names, optionally without the four Benford columns.
std::vector<std::string> feature_columns(bool with_benford = true);

DesignMatrix design_matrix(std::span<const LabeledExample> examples, std::span<const std::string> columns);

struct LogregParams {
  double l2 = 1.0;
  int max_iterations = 100;
  double tolerance = 1e-10;
};

struct DtreeParams {
  int max_depth = 0;  // unlimited
  std::size_t min_samples_leaf = 1;
};

struct AdaBoostParams {
  int rounds = 100;
  int max_depth = 2;  // 1..3
  double learning_rate = 1.0;
  int patience = 25;
};

struct ForestParams {
  int trees = 200;
  int max_depth = 0;
  std::size_t min_samples_leaf = 1;
};

struct GbdtParams {
  int rounds = 300;
  int max_depth = 4;
  double learning_rate = 0.1;
  double l2 = 1.0;
  std::size_t min_samples_leaf = 2;
  double min_child_hessian = 1e-3;
  int patience = 25;
};

struct TrainConfig {
  std::uint64_t seed = 0;
  /// Weight each class by n / (2 * n_class).
  bool balanced_class_weights = true;
  double threshold = 0.5;
  LogregParams logreg;
  DtreeParams dtree;
  AdaBoostParams adaboost;
  ForestParams rforest;
  GbdtParams gbdt;
};

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Models

struct Prediction {
  Label label = Label::nonscam;
  double score = 0.0;  // P(scam)
};

struct ModelState;  // kind-specific learned parameters

/// A fitted classifier bound to its feature schema. Immutable and cheap to
/// copy (the learned state is shared).
class TrainedModel {
 public:
  TrainedModel(ModelKind kind, std::vector<std::string> schema, TrainConfig config,
               std::shared_ptr<const ModelState> state);

  ModelKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& feature_schema() const noexcept { return schema_; }
  const TrainConfig& config() const noexcept { return config_; }
  const ModelState& state() const noexcept { return *state_; }

  /// P(scam) for a vector laid out as feature_schema(). Throws ContractError
  /// on a width mismatch.
  double score(std::span<const double> x) const;

  /// Raw per-feature weights in schema order (not normalized).
  std::vector<double> raw_importances() const;

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);

 private:
  ModelKind kind_;
  std::vector<std::string> schema_;
  TrainConfig config_;
  std::shared_ptr<const ModelState> state_;
};

/// Fits one model. gbdt and adaboost early-stop on the validation set's
/// (class-weighted) logistic loss when it is non-empty.
///
/// Throws TrainingError for a single-class training set and DataError for
/// infinite feature values.
TrainedModel train(ModelKind kind, const DesignMatrix& train_set, const DesignMatrix& valid_set,
                   const TrainConfig& config);

/// label is scam iff score >= config().threshold.
Prediction predict(const TrainedModel& model, std::span<const double> x);
/// Picks the model's schema columns out of a full feature vector.
Prediction predict(const TrainedModel& model, const FeatureVector& features);

/// Normalized importances (sum 1), descending, ties in schema order. Tree
/// models use total split gain; logistic regression uses the absolute
/// coefficient on standardized inputs. With no signal at all every feature
/// gets the same weight.
std::vector<std::pair<std::string, double>> feature_importance(const TrainedModel& model);

void save_model(std::ostream& out, const TrainedModel& model);
TrainedModel load_model(std::istream& in);

// ---------------------------------------------------------------------------
// Evaluation

struct ConfusionMatrix {
  std::size_t tp = 0;  // scam predicted scam
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  ClassMetrics scam;
  ClassMetrics nonscam;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  /// Mean per-class recall.
  double balanced_accuracy = 0.0;
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::vector<std::pair<std::string, double>> importances;
};

/// Metrics from counts alone. Undefined ratios (0/0) are reported as 0.
EvalReport metrics_from_confusion(const ConfusionMatrix& cm);

EvalReport evaluate(const TrainedModel& model, const DesignMatrix& test_set);

nlohmann::json to_json(const EvalReport& report);

// ---------------------------------------------------------------------------
// Ablation

struct BenchArm {
  std::vector<std::string> columns;
  TrainedModel model;
  EvalReport report;
};

struct AblationResult {
  ModelKind kind;
  BenchArm with_benford;
  BenchArm without_benford;
};

/// Trains every kind twice on one shared split: with all 20 features and
/// without the four Benford columns.
std::vector<AblationResult> ablation(std::span<const LabeledExample> examples, const SplitSpec& spec,
                                     std::span<const ModelKind> kinds, const TrainConfig& config);

/// Text table: metric rows by model columns, one block per arm.
void write_comparison_table(std::ostream& out, std::span<const AblationResult> results);

}  // namespace benfordscan
