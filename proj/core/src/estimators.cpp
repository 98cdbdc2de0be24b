#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "benfordscan/error.hpp"
#include "benfordscan/random.hpp"
#include "estimators_impl.hpp"

namespace benfordscan::detail {

namespace {

using nlohmann::json;

constexpr double kProbFloor = 1e-15;
constexpr double kMaxAlpha = 23.0;  // ln((1 - 1e-10) / 1e-10)

double tree_vote(const DecisionTree& tree, std::span<const double> x) { return tree.evaluate(x) >= 0.5 ? 1.0 : -1.0; }

std::vector<double> row_of(const ColumnData& x, std::size_t r) {
  std::vector<double> row(x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) row[c] = x.at(r, c);
  return row;
}

std::vector<double> normalized(std::vector<double> v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (total > 0.0) {
    for (double& x : v) x /= total;
  }
  return v;
}

void add_into(std::vector<double>& acc, const std::vector<double>& v, double scale) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += scale * v[i];
}

json trees_to_json(const std::vector<DecisionTree>& trees) {
  auto out = json::array();
  for (const auto& t : trees) out.push_back(t.to_json());
  return out;
}

std::vector<DecisionTree> trees_from_json(const json& j) {
  std::vector<DecisionTree> trees;
  for (const auto& item : j) trees.push_back(DecisionTree::from_json(item));
  return trees;
}

std::size_t select_best(const std::vector<double>& history, std::size_t first) {
  std::size_t best = first;
  for (std::size_t i = first; i < history.size(); ++i) {
    if (history[i] < history[best]) best = i;
  }
  return best;
}

}  // namespace

FitData make_fit_data(const DesignMatrix& m, const ClassWeights& weights) {
  FitData d{ColumnData::from_rows(m.rows, m.columns.size()), {}, {}};
  for (const auto label : m.labels) {
    const bool pos = label == Label::scam;
    d.positive.push_back(pos ? 1 : 0);
    d.weight.push_back(pos ? weights.positive : weights.negative);
  }
  return d;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logistic_loss(std::span<const double> scores, const FitData& data) {
  double loss = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p = std::clamp(scores[i], kProbFloor, 1.0 - kProbFloor);
    loss -= data.weight[i] * (data.positive[i] ? std::log(p) : std::log1p(-p));
    total += data.weight[i];
  }
  return total > 0.0 ? loss / total : 0.0;
}

// --- logistic regression ---------------------------------------------------

LogisticState fit_logistic(const FitData& train, const LogregParams& params) {
  const std::size_t n = train.x.rows();
  const std::size_t p = train.x.cols();
  LogisticState s;

  for (std::size_t c = 0; c < p; ++c) {
    std::vector<double> present;
    for (const double v : train.x.column(c)) {
      if (!std::isnan(v)) present.push_back(v);
    }
    std::sort(present.begin(), present.end());
    double median = 0.0;
    if (!present.empty()) {
      const std::size_t mid = present.size() / 2;
      median = present.size() % 2 ? present[mid] : std::midpoint(present[mid - 1], present[mid]);
    }
    s.medians.push_back(median);
  }

  Eigen::MatrixXd z(n, p + 1);
  for (std::size_t c = 0; c < p; ++c) {
    long double sum = 0.0L;
    for (std::size_t r = 0; r < n; ++r) {
      const double v = train.x.at(r, c);
      z(r, c) = std::isnan(v) ? s.medians[c] : v;
      sum += z(r, c);
    }
    const double mean = static_cast<double>(sum / n);
    long double sq = 0.0L;
    for (std::size_t r = 0; r < n; ++r) sq += (z(r, c) - mean) * (z(r, c) - mean);
    const double sd = static_cast<double>(std::sqrt(sq / n));
    const double scale = sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
    for (std::size_t r = 0; r < n; ++r) z(r, c) = (z(r, c) - mean) / scale;
    s.means.push_back(mean);
    s.scales.push_back(scale);
  }
  z.col(p).setOnes();

  Eigen::VectorXd y(n), w(n);
  for (std::size_t r = 0; r < n; ++r) {
    y(r) = train.positive[r];
    w(r) = train.weight[r];
  }
  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(p + 1, params.l2);
  penalty(p) = 0.0;

  auto objective = [&](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = z * beta;
    double loss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      // log(1 + e^eta) - y * eta, computed stably
      const double e = eta(r);
      loss += w(r) * ((e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e))) - y(r) * e);
    }
    return loss + 0.5 * beta.cwiseProduct(penalty).dot(beta);
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
  double current = objective(beta);
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    const Eigen::VectorXd eta = z * beta;
    Eigen::VectorXd resid(n), curv(n);
    for (std::size_t r = 0; r < n; ++r) {
      const double prob = sigmoid(eta(r));
      resid(r) = w(r) * (prob - y(r));
      curv(r) = w(r) * prob * (1.0 - prob);
    }
    const Eigen::VectorXd grad = z.transpose() * resid + penalty.cwiseProduct(beta);
    Eigen::MatrixXd hess = z.transpose() * curv.asDiagonal() * z;
    hess.diagonal() += penalty + Eigen::VectorXd::Constant(p + 1, 1e-10);
    const Eigen::VectorXd step = hess.ldlt().solve(grad);
    if (!step.allFinite()) break;

    double t = 1.0;
    Eigen::VectorXd candidate = beta - step;
    double next = objective(candidate);
    while (next > current && t > 1e-8) {
      t *= 0.5;
      candidate = beta - t * step;
      next = objective(candidate);
    }
    if (next > current) break;
    beta = candidate;
    const bool converged = (t * step).lpNorm<Eigen::Infinity>() < params.tolerance || current - next < 1e-14 * (1.0 + std::abs(current));
    current = next;
    if (converged) break;
  }

  s.coefficients.assign(beta.data(), beta.data() + p);
  s.intercept = beta(p);
  return s;
}

// --- single tree -------------------------------------------------------------

DtreeState fit_dtree(const FitData& train, const DtreeParams& params) {
  GiniTreeParams gp{params.max_depth, params.min_samples_leaf, 0};
  return {grow_gini_tree(train.x, train.positive, train.weight, gp)};
}

// --- AdaBoost (SAMME, two classes) ------------------------------------------

AdaBoostState fit_adaboost(const FitData& train, const FitData& valid, const AdaBoostParams& params) {
  const std::size_t n = train.x.rows();
  AdaBoostState s;
  std::vector<double> w = normalized(train.weight);
  std::vector<double> valid_margin(valid.x.rows(), 0.0);
  std::vector<double> valid_scores(valid.x.rows());
  const GiniTreeParams gp{std::clamp(params.max_depth, 1, 3), 1, 0};
  std::size_t since_best = 0;

  for (int round = 0; round < params.rounds; ++round) {
    auto tree = grow_gini_tree(train.x, train.positive, w, gp);
    std::vector<char> miss(n);
    double err = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const bool vote = tree_vote(tree, row_of(train.x, r)) > 0.0;
      miss[r] = vote != static_cast<bool>(train.positive[r]);
      if (miss[r]) err += w[r];
    }
    if (err >= 0.5 - 1e-12) break;
    const double alpha = std::min(kMaxAlpha, params.learning_rate * std::log((1.0 - err) / std::max(err, 1e-10)));

    for (std::size_t r = 0; r < n; ++r) {
      if (miss[r]) w[r] *= std::exp(alpha);
    }
    w = normalized(std::move(w));

    if (valid.x.rows() > 0) {
      for (std::size_t r = 0; r < valid.x.rows(); ++r) {
        valid_margin[r] += alpha * tree_vote(tree, row_of(valid.x, r));
        valid_scores[r] = sigmoid(2.0 * valid_margin[r]);
      }
      s.valid_loss.push_back(logistic_loss(valid_scores, valid));
    }
    s.trees.push_back(std::move(tree));
    s.alphas.push_back(alpha);

    if (valid.x.rows() > 0) {
      const std::size_t best = select_best(s.valid_loss, 0);
      since_best = s.valid_loss.size() - 1 - best;
      if (since_best >= static_cast<std::size_t>(params.patience)) break;
    }
    if (err <= 1e-10) break;
  }

  if (valid.x.rows() > 0 && !s.valid_loss.empty()) {
    s.best_round = select_best(s.valid_loss, 0) + 1;
    s.trees.resize(s.best_round);
    s.alphas.resize(s.best_round);
  } else {
    s.best_round = s.trees.size();
  }
  return s;
}

// --- random forest -------------------------------------------------------------

ForestState fit_forest(const FitData& train, const ForestParams& params, std::uint64_t seed) {
  const std::size_t n = train.x.rows();
  const std::size_t p = train.x.cols();
  const auto max_features = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(p))));
  const GiniTreeParams gp{params.max_depth, params.min_samples_leaf, max_features};

  ForestState s;
  std::vector<double> oob_sum(n, 0.0);
  std::vector<std::size_t> oob_votes(n, 0);

  for (int t = 0; t < params.trees; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<double> counts(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) counts[rng.below(n)] += 1.0;
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) weights[i] = counts[i] * train.weight[i];

    auto tree = grow_gini_tree(train.x, train.positive, weights, gp, &rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[i] == 0.0) {
        oob_sum[i] += tree.evaluate(row_of(train.x, i));
        ++oob_votes[i];
      }
    }
    s.trees.push_back(std::move(tree));
  }

  std::size_t scored = 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (oob_votes[i] == 0) continue;
    ++scored;
    const bool flagged = oob_sum[i] / static_cast<double>(oob_votes[i]) >= 0.5;
    correct += flagged == static_cast<bool>(train.positive[i]);
  }
  if (scored > 0) s.oob_accuracy = static_cast<double>(correct) / static_cast<double>(scored);
  return s;
}

// --- gradient-boosted trees ------------------------------------------------

GbdtState fit_gbdt(const FitData& train, const FitData& valid, const GbdtParams& params) {
  const std::size_t n = train.x.rows();
  const std::size_t m = valid.x.rows();
  GbdtState s;

  const double positives = std::accumulate(train.positive.begin(), train.positive.end(), 0.0);
  const double rate = positives / static_cast<double>(n);
  s.base_score = std::log(rate / (1.0 - rate));

  std::vector<double> f_train(n, s.base_score);
  std::vector<double> f_valid(m, s.base_score);
  std::vector<double> probs(m);
  auto record_valid_loss = [&] {
    for (std::size_t r = 0; r < m; ++r) probs[r] = sigmoid(f_valid[r]);
    s.valid_loss.push_back(logistic_loss(probs, valid));
  };
  if (m > 0) record_valid_loss();

  const GradientTreeParams gp{params.max_depth, params.min_samples_leaf, params.l2, params.min_child_hessian,
                              params.learning_rate};
  std::vector<double> grad(n), hess(n);

  for (int round = 0; round < params.rounds; ++round) {
    for (std::size_t r = 0; r < n; ++r) {
      const double prob = sigmoid(f_train[r]);
      grad[r] = train.weight[r] * (prob - train.positive[r]);
      hess[r] = std::max(train.weight[r] * prob * (1.0 - prob), 1e-16);
    }
    auto tree = grow_gradient_tree(train.x, grad, hess, gp);
    // A tree without a split has no gain; boosting has converged.
    if (tree.is_stump_only()) break;

    for (std::size_t r = 0; r < n; ++r) f_train[r] += tree.evaluate(row_of(train.x, r));
    for (std::size_t r = 0; r < m; ++r) f_valid[r] += tree.evaluate(row_of(valid.x, r));
    s.trees.push_back(std::move(tree));

    if (m > 0) {
      record_valid_loss();
      const std::size_t best = select_best(s.valid_loss, 0);
      if (s.valid_loss.size() - 1 - best >= static_cast<std::size_t>(params.patience)) break;
    }
  }

  s.best_round = m > 0 ? select_best(s.valid_loss, 0) : s.trees.size();
  s.trees.resize(s.best_round);
  return s;
}

// --- scoring, importances, persistence ---------------------------------------

double score(const ModelState& state, std::span<const double> x) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LogisticState>) {
          double eta = s.intercept;
          for (std::size_t c = 0; c < s.coefficients.size(); ++c) {
            const double v = std::isnan(x[c]) ? s.medians[c] : x[c];
            eta += s.coefficients[c] * (v - s.means[c]) / s.scales[c];
          }
          return sigmoid(eta);
        } else if constexpr (std::is_same_v<T, DtreeState>) {
          return s.tree.evaluate(x);
        } else if constexpr (std::is_same_v<T, AdaBoostState>) {
          double margin = 0.0;
          for (std::size_t i = 0; i < s.trees.size(); ++i) margin += s.alphas[i] * tree_vote(s.trees[i], x);
          return sigmoid(2.0 * margin);
        } else if constexpr (std::is_same_v<T, ForestState>) {
          if (s.trees.empty()) return 0.0;
          double sum = 0.0;
          for (const auto& t : s.trees) sum += t.evaluate(x);
          return sum / static_cast<double>(s.trees.size());
        } else {
          double f = s.base_score;
          for (const auto& t : s.trees) f += t.evaluate(x);
          return sigmoid(f);
        }
      },
      state.params);
}

std::vector<double> raw_importances(const ModelState& state, std::size_t n_features) {
  return std::visit(
      [&](const auto& s) -> std::vector<double> {
        using T = std::decay_t<decltype(s)>;
        std::vector<double> acc(n_features, 0.0);
        if constexpr (std::is_same_v<T, LogisticState>) {
          for (std::size_t c = 0; c < n_features; ++c) acc[c] = std::abs(s.coefficients[c]);
        } else if constexpr (std::is_same_v<T, DtreeState>) {
          acc = s.tree.feature_gains(n_features);
        } else if constexpr (std::is_same_v<T, AdaBoostState>) {
          for (std::size_t i = 0; i < s.trees.size(); ++i) {
            add_into(acc, normalized(s.trees[i].feature_gains(n_features)), s.alphas[i]);
          }
        } else if constexpr (std::is_same_v<T, ForestState>) {
          for (const auto& t : s.trees) add_into(acc, normalized(t.feature_gains(n_features)), 1.0);
        } else {
          for (const auto& t : s.trees) add_into(acc, t.feature_gains(n_features), 1.0);
        }
        return acc;
      },
      state.params);
}

json state_to_json(const ModelState& state) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LogisticState>) {
          return {{"medians", s.medians},
                  {"means", s.means},
                  {"scales", s.scales},
                  {"coefficients", s.coefficients},
                  {"intercept", s.intercept}};
        } else if constexpr (std::is_same_v<T, DtreeState>) {
          return {{"tree", s.tree.to_json()}};
        } else if constexpr (std::is_same_v<T, AdaBoostState>) {
          return {{"trees", trees_to_json(s.trees)},
                  {"alphas", s.alphas},
                  {"valid_loss", s.valid_loss},
                  {"best_round", s.best_round}};
        } else if constexpr (std::is_same_v<T, ForestState>) {
          return {{"trees", trees_to_json(s.trees)},
                  {"oob_accuracy", s.oob_accuracy ? json(*s.oob_accuracy) : json(nullptr)}};
        } else {
          return {{"base_score", s.base_score},
                  {"trees", trees_to_json(s.trees)},
                  {"valid_loss", s.valid_loss},
                  {"best_round", s.best_round}};
        }
      },
      state.params);
}

ModelState state_from_json(ModelKind kind, const json& j) {
  switch (kind) {
    case ModelKind::logreg: {
      LogisticState s;
      s.medians = j.at("medians").get<std::vector<double>>();
      s.means = j.at("means").get<std::vector<double>>();
      s.scales = j.at("scales").get<std::vector<double>>();
      s.coefficients = j.at("coefficients").get<std::vector<double>>();
      s.intercept = j.at("intercept").get<double>();
      return {s};
    }
    case ModelKind::dtree:
      return {DtreeState{DecisionTree::from_json(j.at("tree"))}};
    case ModelKind::adaboost: {
      AdaBoostState s;
      s.trees = trees_from_json(j.at("trees"));
      s.alphas = j.at("alphas").get<std::vector<double>>();
      s.valid_loss = j.at("valid_loss").get<std::vector<double>>();
      s.best_round = j.at("best_round").get<std::size_t>();
      if (s.alphas.size() != s.trees.size()) throw SchemaError("adaboost alphas/trees length mismatch");
      return {s};
    }
    case ModelKind::rforest: {
      ForestState s;
      s.trees = trees_from_json(j.at("trees"));
      if (!j.at("oob_accuracy").is_null()) s.oob_accuracy = j.at("oob_accuracy").get<double>();
      return {s};
    }
    case ModelKind::gbdt: {
      GbdtState s;
      s.base_score = j.at("base_score").get<double>();
      s.trees = trees_from_json(j.at("trees"));
      s.valid_loss = j.at("valid_loss").get<std::vector<double>>();
      s.best_round = j.at("best_round").get<std::size_t>();
      return {s};
    }
  }
  throw SchemaError("unknown model kind");
}

}  // namespace benfordscan::detail
