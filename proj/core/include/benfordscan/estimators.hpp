#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "benfordscan/tree.hpp"

namespace benfordscan {

/// L2-regularized logistic regression on median-imputed, standardized inputs.
struct LogisticState {
  std::vector<double> medians;
  std::vector<double> means;
  std::vector<double> scales;
  std::vector<double> coefficients;  // on standardized inputs
  double intercept = 0.0;
};

struct DtreeState {
  DecisionTree tree;
};

/// Discrete (SAMME) AdaBoost; score = sigmoid(2 * sum(alpha * h(x))).
struct AdaBoostState {
  std::vector<DecisionTree> trees;
  std::vector<double> alphas;
  std::vector<double> valid_loss;  // index 0 = empty ensemble
  std::size_t best_round = 0;
};

struct ForestState {
  std::vector<DecisionTree> trees;
  std::optional<double> oob_accuracy;
};

struct GbdtState {
  double base_score = 0.0;  // log-odds of the training positive rate
  std::vector<DecisionTree> trees;
  std::vector<double> valid_loss;  // index 0 = base score only
  std::size_t best_round = 0;
};

struct ModelState {
  std::variant<LogisticState, DtreeState, AdaBoostState, ForestState, GbdtState> params;
};

}  // namespace benfordscan
