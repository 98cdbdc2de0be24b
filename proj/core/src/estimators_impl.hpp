#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "benfordscan/estimators.hpp"
#include "benfordscan/models.hpp"
#include "benfordscan/tree.hpp"

namespace benfordscan::detail {

/// Training rows with per-row class weights derived from the training set.
struct FitData {
  ColumnData x;
  std::vector<int> positive;
  std::vector<double> weight;
};

struct ClassWeights {
  double positive = 1.0;
  double negative = 1.0;
};

FitData make_fit_data(const DesignMatrix& m, const ClassWeights& weights);

double sigmoid(double z);
/// Weighted mean logistic loss of P(scam) scores.
double logistic_loss(std::span<const double> scores, const FitData& data);

LogisticState fit_logistic(const FitData& train, const LogregParams& params);
DtreeState fit_dtree(const FitData& train, const DtreeParams& params);
AdaBoostState fit_adaboost(const FitData& train, const FitData& valid, const AdaBoostParams& params);
ForestState fit_forest(const FitData& train, const ForestParams& params, std::uint64_t seed);
GbdtState fit_gbdt(const FitData& train, const FitData& valid, const GbdtParams& params);

double score(const ModelState& state, std::span<const double> x);
std::vector<double> raw_importances(const ModelState& state, std::size_t n_features);

nlohmann::json state_to_json(const ModelState& state);
ModelState state_from_json(ModelKind kind, const nlohmann::json& j);

}  // namespace benfordscan::detail
