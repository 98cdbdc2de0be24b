#include <doctest.h>

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "benfordscan/error.hpp"
#include "benfordscan/random.hpp"
#include "benfordscan/tree.hpp"

using namespace benfordscan;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Toy {
  ColumnData x{0, 0};
  std::vector<int> positive;
  std::vector<double> weight;
};

Toy separable(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  Toy t;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform(), b = rng.uniform();
    rows.push_back({a, b});
    t.positive.push_back(a + 0.3 * b > 0.6 ? 1 : 0);
  }
  t.x = ColumnData::from_rows(rows, 2);
  t.weight.assign(n, 1.0);
  return t;
}

}  // namespace

TEST_CASE("unlimited gini tree fits its training data") {
  const auto t = separable(200, 1);
  const auto tree = grow_gini_tree(t.x, t.positive, t.weight, GiniTreeParams{});
  for (std::size_t i = 0; i < 200; ++i) {
    const double row[2] = {t.x.at(i, 0), t.x.at(i, 1)};
    CHECK((tree.evaluate(row) >= 0.5) == (t.positive[i] == 1));
  }
  const auto gains = tree.feature_gains(2);
  CHECK(gains[0] > gains[1]);
}

TEST_CASE("depth limit") {
  const auto t = separable(200, 2);
  GiniTreeParams p;
  p.max_depth = 1;
  const auto tree = grow_gini_tree(t.x, t.positive, t.weight, p);
  CHECK(tree.nodes().size() == 3);
}

TEST_CASE("constant column gives a single leaf") {
  const auto x = ColumnData::from_rows({{1.0}, {1.0}, {1.0}, {1.0}}, 1);
  const std::vector<int> y{1, 0, 0, 0};
  const std::vector<double> w(4, 1.0);
  const auto tree = grow_gini_tree(x, y, w, GiniTreeParams{});
  CHECK(tree.is_stump_only());
  const double row[1] = {1.0};
  CHECK(tree.evaluate(row) == doctest::Approx(0.25));
}

TEST_CASE("missing values follow the learned side") {
  // Missing rows are all positive, so they should be sent with the positives.
  const auto x = ColumnData::from_rows({{0.1}, {0.2}, {0.3}, {0.8}, {0.9}, {kNaN}, {kNaN}}, 1);
  const std::vector<int> y{0, 0, 0, 1, 1, 1, 1};
  const std::vector<double> w(7, 1.0);
  const auto tree = grow_gini_tree(x, y, w, GiniTreeParams{});
  const double missing[1] = {kNaN};
  CHECK(tree.evaluate(missing) == 1.0);
}

TEST_CASE("unseen missing values go to the larger child") {
  const auto x = ColumnData::from_rows({{0.1}, {0.2}, {0.3}, {0.4}, {0.9}}, 1);
  const std::vector<int> y{0, 0, 0, 0, 1};
  const std::vector<double> w(5, 1.0);
  const auto tree = grow_gini_tree(x, y, w, GiniTreeParams{});
  const double missing[1] = {kNaN};
  CHECK(tree.evaluate(missing) == 0.0);
}

TEST_CASE("gradient stump leaf is the shrunken newton step") {
  const auto x = ColumnData::from_rows({{1.0}, {1.0}, {1.0}}, 1);
  const std::vector<double> g{0.5, -0.25, 0.5};
  const std::vector<double> h{0.25, 0.25, 0.25};
  GradientTreeParams p;
  p.learning_rate = 0.1;
  p.l2 = 1.0;
  const auto tree = grow_gradient_tree(x, g, h, p);
  REQUIRE(tree.is_stump_only());
  const double row[1] = {1.0};
  CHECK(tree.evaluate(row) == doctest::Approx(-0.1 * 0.75 / 1.75));
}

TEST_CASE("increasing transforms do not change routing") {
  const auto t = separable(300, 3);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < 300; ++i) rows.push_back({std::exp(5.0 * t.x.at(i, 0)), t.x.at(i, 1)});
  const auto warped = ColumnData::from_rows(rows, 2);
  GiniTreeParams p;
  p.max_depth = 4;
  const auto a = grow_gini_tree(t.x, t.positive, t.weight, p);
  const auto b = grow_gini_tree(warped, t.positive, t.weight, p);
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    const double u = rng.uniform(), v = rng.uniform();
    const double r1[2] = {u, v};
    const double r2[2] = {std::exp(5.0 * u), v};
    CHECK(a.evaluate(r1) == b.evaluate(r2));
  }
}

TEST_CASE("json round trip and validation") {
  const auto t = separable(100, 4);
  const auto tree = grow_gini_tree(t.x, t.positive, t.weight, GiniTreeParams{});
  CHECK(DecisionTree::from_json(tree.to_json()) == tree);

  auto broken = tree.to_json();
  broken[0]["left"] = 999;
  CHECK_THROWS(DecisionTree::from_json(broken));
}

TEST_CASE("feature subsampling needs an rng and stays deterministic") {
  const auto t = separable(200, 5);
  GiniTreeParams p;
  p.max_features = 1;
  Rng r1(1), r2(1);
  CHECK(grow_gini_tree(t.x, t.positive, t.weight, p, &r1) == grow_gini_tree(t.x, t.positive, t.weight, p, &r2));
  CHECK_THROWS_AS(grow_gini_tree(t.x, t.positive, t.weight, p, nullptr), ContractError);
}
