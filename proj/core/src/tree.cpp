#include "benfordscan/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "benfordscan/error.hpp"

namespace benfordscan {

namespace {

constexpr double kMinGain = 1e-12;

struct GiniStats {
  double weight = 0.0;
  double positive = 0.0;
  std::size_t count = 0;
};

struct GradStats {
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
};

struct GiniPolicy {
  std::span<const int> positive;
  std::span<const double> weights;
  GiniTreeParams params;

  void add(GiniStats& s, std::size_t row) const {
    s.weight += weights[row];
    s.positive += positive[row] ? weights[row] : 0.0;
    ++s.count;
  }
  // Negative weighted Gini impurity; a split's gain is the sum over the
  // children minus the parent.
  double objective(const GiniStats& s) const {
    if (s.weight <= 0.0) return 0.0;
    const double neg = s.weight - s.positive;
    return -2.0 * s.positive * neg / s.weight;
  }
  double leaf_value(const GiniStats& s) const { return s.weight > 0.0 ? s.positive / s.weight : 0.0; }
  bool pure(const GiniStats& s) const { return s.positive <= 0.0 || s.positive >= s.weight; }
  bool admissible(const GiniStats& s) const { return s.count >= params.min_samples_leaf && s.weight > 0.0; }
  bool active(std::size_t row) const { return weights[row] > 0.0; }
  int max_depth() const { return params.max_depth; }
  std::size_t min_leaf() const { return params.min_samples_leaf; }
};

struct GradPolicy {
  std::span<const double> gradient;
  std::span<const double> hessian;
  GradientTreeParams params;

  void add(GradStats& s, std::size_t row) const {
    s.g += gradient[row];
    s.h += hessian[row];
    ++s.count;
  }
  double objective(const GradStats& s) const { return 0.5 * s.g * s.g / (s.h + params.l2); }
  double leaf_value(const GradStats& s) const { return -params.learning_rate * s.g / (s.h + params.l2); }
  bool pure(const GradStats&) const { return false; }
  bool admissible(const GradStats& s) const {
    return s.count >= params.min_samples_leaf && s.h >= params.min_child_hessian;
  }
  bool active(std::size_t) const { return true; }
  int max_depth() const { return params.max_depth; }
  std::size_t min_leaf() const { return params.min_samples_leaf; }
};

template <class Stats>
Stats combine(const Stats& a, const Stats& b) {
  if constexpr (std::is_same_v<Stats, GiniStats>) {
    return {a.weight + b.weight, a.positive + b.positive, a.count + b.count};
  } else {
    return {a.g + b.g, a.h + b.h, a.count + b.count};
  }
}

template <class Stats>
Stats difference(const Stats& a, const Stats& b) {
  if constexpr (std::is_same_v<Stats, GiniStats>) {
    return {a.weight - b.weight, a.positive - b.positive, a.count - b.count};
  } else {
    return {a.g - b.g, a.h - b.h, a.count - b.count};
  }
}

struct Candidate {
  double gain = kMinGain;
  int feature = -1;
  double threshold = 0.0;
  bool missing_left = true;
};

template <class Stats, class Policy>
class Grower {
 public:
  Grower(const ColumnData& x, const Policy& policy, Rng* rng, std::size_t max_features)
      : x_(x), policy_(policy), rng_(rng), max_features_(max_features) {}

  DecisionTree grow() {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < x_.rows(); ++r) {
      if (policy_.active(r)) rows.push_back(r);
    }
    build(rows, 0);
    return DecisionTree(std::move(nodes_));
  }

 private:
  int build(const std::vector<std::size_t>& rows, int depth) {
    Stats total{};
    for (const auto r : rows) policy_.add(total, r);

    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[id].value = policy_.leaf_value(total);

    const bool depth_left = policy_.max_depth() <= 0 || depth < policy_.max_depth();
    if (!depth_left || rows.size() < 2 * policy_.min_leaf() || policy_.pure(total)) {
      return id;
    }

    const Candidate best = best_split(rows, total);
    if (best.feature < 0) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (const auto r : rows) {
      const double v = x_.at(r, static_cast<std::size_t>(best.feature));
      const bool goes_left = std::isnan(v) ? best.missing_left : v <= best.threshold;
      (goes_left ? left : right).push_back(r);
    }

    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    nodes_[id].missing_left = best.missing_left;
    nodes_[id].gain = best.gain;
    const int l = build(left, depth + 1);
    const int rr = build(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = rr;
    return id;
  }

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> features(x_.cols());
    std::iota(features.begin(), features.end(), 0);
    if (max_features_ == 0 || max_features_ >= features.size()) return features;
    // Partial Fisher-Yates, then restore index order for stable tie-breaks.
    for (std::size_t i = 0; i < max_features_; ++i) {
      const auto j = i + static_cast<std::size_t>(rng_->below(features.size() - i));
      std::swap(features[i], features[j]);
    }
    features.resize(max_features_);
    std::sort(features.begin(), features.end());
    return features;
  }

  Candidate best_split(const std::vector<std::size_t>& rows, const Stats& total) {
    const double parent = policy_.objective(total);
    Candidate best;
    std::vector<std::pair<double, std::size_t>> present;

    for (const auto f : candidate_features()) {
      present.clear();
      Stats missing{};
      for (const auto r : rows) {
        const double v = x_.at(r, f);
        if (std::isnan(v)) {
          policy_.add(missing, r);
        } else {
          present.emplace_back(v, r);
        }
      }
      if (present.empty()) continue;
      std::sort(present.begin(), present.end());
      const Stats present_total = difference(total, missing);

      auto consider = [&](const Stats& left, const Stats& right, double threshold, bool missing_left) {
        if (!policy_.admissible(left) || !policy_.admissible(right)) return;
        const double gain = policy_.objective(left) + policy_.objective(right) - parent;
        if (gain > best.gain) {
          best = {gain, static_cast<int>(f), threshold, missing_left};
        }
      };

      Stats prefix{};
      for (std::size_t i = 0; i + 1 < present.size(); ++i) {
        policy_.add(prefix, present[i].second);
        if (present[i].first == present[i + 1].first) continue;
        const double threshold = present[i].first;
        const Stats rest = difference(present_total, prefix);
        if (missing.count == 0) {
          consider(prefix, rest, threshold, prefix.count >= rest.count);
        } else {
          consider(combine(prefix, missing), rest, threshold, true);
          consider(prefix, combine(rest, missing), threshold, false);
        }
      }
      if (missing.count > 0) {
        // Present vs. missing.
        consider(present_total, missing, present.back().first, false);
      }
    }
    return best;
  }

  const ColumnData& x_;
  const Policy& policy_;
  Rng* rng_;
  std::size_t max_features_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

ColumnData ColumnData::from_rows(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  ColumnData data(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw ContractError("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                          " values, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) data.at(r, c) = rows[r][c];
  }
  return data;
}

double DecisionTree::evaluate(std::span<const double> x) const {
  if (nodes_.empty()) return 0.0;
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    const double v = x[static_cast<std::size_t>(n.feature)];
    const bool left = std::isnan(v) ? n.missing_left : v <= n.threshold;
    i = static_cast<std::size_t>(left ? n.left : n.right);
  }
  return nodes_[i].value;
}

std::vector<double> DecisionTree::feature_gains(std::size_t n_features) const {
  std::vector<double> gains(n_features, 0.0);
  for (const auto& n : nodes_) {
    if (!n.is_leaf()) gains[static_cast<std::size_t>(n.feature)] += n.gain;
  }
  return gains;
}

nlohmann::json DecisionTree::to_json() const {
  auto nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    if (n.is_leaf()) {
      nodes.push_back({{"value", n.value}});
    } else {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"missing_left", n.missing_left},
                       {"left", n.left},
                       {"right", n.right},
                       {"gain", n.gain},
                       {"value", n.value}});
    }
  }
  return nodes;
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  std::vector<TreeNode> nodes;
  for (const auto& item : j) {
    TreeNode n;
    n.value = item.at("value").get<double>();
    if (item.contains("feature")) {
      n.feature = item.at("feature").get<int>();
      n.threshold = item.at("threshold").get<double>();
      n.missing_left = item.at("missing_left").get<bool>();
      n.left = item.at("left").get<int>();
      n.right = item.at("right").get<int>();
      n.gain = item.at("gain").get<double>();
    }
    nodes.push_back(n);
  }
  const auto size = static_cast<int>(nodes.size());
  for (const auto& n : nodes) {
    if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 || n.left >= size || n.right >= size)) {
      throw SchemaError("tree node references a child outside the node list");
    }
  }
  return DecisionTree(std::move(nodes));
}

DecisionTree grow_gini_tree(const ColumnData& x, std::span<const int> positive, std::span<const double> weights,
                            const GiniTreeParams& params, Rng* rng) {
  if (positive.size() != x.rows() || weights.size() != x.rows()) {
    throw ContractError("label/weight length does not match the row count");
  }
  if (params.max_features != 0 && params.max_features < x.cols() && rng == nullptr) {
    throw ContractError("feature subsampling needs a random generator");
  }
  GiniPolicy policy{positive, weights, params};
  return Grower<GiniStats, GiniPolicy>(x, policy, rng, params.max_features).grow();
}

DecisionTree grow_gradient_tree(const ColumnData& x, std::span<const double> gradient, std::span<const double> hessian,
                                const GradientTreeParams& params) {
  if (gradient.size() != x.rows() || hessian.size() != x.rows()) {
    throw ContractError("gradient/hessian length does not match the row count");
  }
  GradPolicy policy{gradient, hessian, params};
  return Grower<GradStats, GradPolicy>(x, policy, nullptr, 0).grow();
}

}  // namespace benfordscan
