#include <doctest.h>

#include <stdexcept>

#include "benfordscan/random.hpp"
#include "benfordscan/wei.hpp"

using benfordscan::Rng;
using benfordscan::WeiAmount;

TEST_CASE("parse keeps digits beyond 64 bits") {
  const auto v = WeiAmount::parse("350000000000000000000");
  CHECK(v.str() == "350000000000000000000");
  CHECK(v.to_double() == doctest::Approx(3.5e20));
}

TEST_CASE("leading zeros are dropped") {
  CHECK(WeiAmount::parse("000123").str() == "123");
  CHECK(WeiAmount::parse("0000").is_zero());
}

TEST_CASE("negative and malformed amounts") {
  CHECK_THROWS_AS(WeiAmount::parse("-5"), std::domain_error);
  CHECK_THROWS_AS(WeiAmount::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(WeiAmount::parse("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(WeiAmount::parse("1e18"), std::invalid_argument);
  CHECK_THROWS_AS(WeiAmount::parse(" 7"), std::invalid_argument);
  CHECK_THROWS_AS(WeiAmount::parse("+7"), std::invalid_argument);
}

TEST_CASE("ordering is numeric") {
  CHECK(WeiAmount::parse("99") < WeiAmount::parse("100"));
  CHECK(WeiAmount::parse("100") > WeiAmount::parse("099"));
  CHECK(WeiAmount::parse("12") == WeiAmount::from_uint(12));
  CHECK(WeiAmount::from_uint(0).is_zero());
}

TEST_CASE("ordering agrees with integers") {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const auto a = rng.next() >> rng.below(64);
    const auto b = rng.next() >> rng.below(64);
    CHECK((WeiAmount::from_uint(a) < WeiAmount::from_uint(b)) == (a < b));
    CHECK(WeiAmount::from_uint(a).str() == std::to_string(a));
  }
}

TEST_CASE("rng is reproducible and bounded") {
  Rng a(11), b(11);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(7);
    CHECK(x == b.below(7));
    CHECK(x < 7);
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto k = a.between(-3, 3);
    CHECK(k == b.between(-3, 3));
    CHECK(k >= -3);
    CHECK(k <= 3);
  }
  CHECK(benfordscan::derive_seed(1, 2) == benfordscan::derive_seed(1, 2));
  CHECK(benfordscan::derive_seed(1, 2) != benfordscan::derive_seed(1, 3));
}
