#include <doctest.h>

#include "metachain/errors.hpp"
#include "metachain/scale_algebra.hpp"
#include "support/fixtures.hpp"

using namespace metachain;
using testing_support::sq;

TEST_SUITE("scale_algebra") {
  TEST_CASE("products and quotients") {
    CHECK(mul(sq(1, 2), sq(1, 0)) == sq(1, 2));
    CHECK(div(sq(1, 2), sq(2, 0)) == sq(1, 2, 2, 1));
    CHECK(mul(sq(3, 1, 1, 2), sq(2, 1, 1, 2)) == sq(6, 1));
    CHECK(inverse(sq(4, -3)) == sq(1, 4, 3, 1));
  }

  TEST_CASE("sums keep the dominant term") {
    CHECK(add(sq(1, 0), sq(1, 0)) == sq(2, 0));
    CHECK(add(sq(1, 0), sq(5, 3)) == sq(1, 0));
    CHECK(add(sq(1, 2, 1, 1), sq(1, 2, 1, 1)) == sq(1, 1));
    Weight z;
    CHECK(add(z, Weight(sq(3, 1))) == Weight(sq(3, 1)));
    CHECK(!mul(z, Weight(sq(3, 1))));
  }

  TEST_CASE("asymptotic comparison") {
    CHECK(compare(sq(7, 1), sq(1, 0)) == Magnitude::kPrec);
    CHECK(compare(sq(2, 1), sq(5, 1)) == Magnitude::kAsympEquiv);
    CHECK(compare(sq(1, -2), sq(1, 0)) == Magnitude::kSucc);
    CHECK(asymptotic_cmp(sq(1, 1), sq(9, 1)) < 0);
    CHECK(asymptotic_cmp(sq(1, 1), sq(1, 2)) > 0);
    CHECK(asymptotic_cmp(sq(3, 1), sq(3, 1)) == 0);
  }

  TEST_CASE("limit ratios") {
    CHECK(limit_ratio(sq(2, -2), sq(2, -2)) == LimitRatio{false, Rational(1)});
    CHECK(limit_ratio(sq(2, -2), sq(1, -3)) == LimitRatio{false, Rational(0)});
    CHECK(limit_ratio(sq(3, 1), sq(2, 1)) == LimitRatio{false, Rational(3, 2)});
    CHECK(limit_ratio(sq(1, -3), sq(2, -2)).infinite);
  }

  TEST_CASE("rational text") {
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("-2") == Rational(-2));
    CHECK(format_rational(Rational(2)) == "2/1");
    CHECK_THROWS_AS(parse_rational("0.5"), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
  }

  TEST_CASE("labels") {
    CHECK(to_label(sq(2, -2)) == "2·ε^-2");
    CHECK(to_label(Weight{}) == "0");
  }

  TEST_CASE("non-positive coefficients are rejected") {
    CHECK_THROWS_AS(ScaledQuantity(Rational(0), Rational(1)), Error);
    CHECK_THROWS_AS(ScaledQuantity(Rational(-1), Rational(1)), Error);
  }
}
