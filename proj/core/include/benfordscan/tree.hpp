#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "benfordscan/random.hpp"

namespace benfordscan {

/// Column-major feature storage; NaN marks a missing value.
class ColumnData {
 public:
  ColumnData(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), values_(rows * cols) {}
  static ColumnData from_rows(const std::vector<std::vector<double>>& rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t row, std::size_t col) const { return values_[col * rows_ + row]; }
  double& at(std::size_t row, std::size_t col) { return values_[col * rows_ + row]; }
  std::span<const double> column(std::size_t col) const { return {values_.data() + col * rows_, rows_}; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// Internal nodes route `x <= threshold` left; NaN follows `missing_left`.
/// Thresholds are always training values, so any strictly increasing
/// transform of a column (applied to both threshold and input) routes
/// identically.
struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0.0;
  bool missing_left = true;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output
  double gain = 0.0;   // split gain for internal nodes

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  double evaluate(std::span<const double> x) const;
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  bool is_stump_only() const noexcept { return nodes_.size() <= 1; }

  /// Summed split gain per feature index.
  std::vector<double> feature_gains(std::size_t n_features) const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

struct GiniTreeParams {
  int max_depth = 0;  // 0 = unlimited
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;  // 0 = every feature at every node
};

/// Weighted CART classification tree. Leaves hold the weighted fraction of
/// positives. Rows with zero weight are ignored. `rng` is required when
/// max_features subsamples.
DecisionTree grow_gini_tree(const ColumnData& x, std::span<const int> positive, std::span<const double> weights,
                            const GiniTreeParams& params, Rng* rng = nullptr);

struct GradientTreeParams {
  int max_depth = 4;
  std::size_t min_samples_leaf = 2;
  double l2 = 1.0;
  double min_child_hessian = 1e-3;
  double learning_rate = 0.1;
};

/// Second-order regression tree on per-row gradient/hessian; leaves hold the
/// shrunken Newton step -lr * G / (H + l2).
DecisionTree grow_gradient_tree(const ColumnData& x, std::span<const double> gradient, std::span<const double> hessian,
                                const GradientTreeParams& params);

}  // namespace benfordscan
