#include <cmath>

#include <stdexcept>

#include "doctest.h"
#include "flexplan/rational.h"

using flexplan::Rational;

TEST_SUITE("rational") {
  TEST_CASE("normalizes sign and common factors") {
    const Rational r(6, -8);
    CHECK(r.num() == -3);
    CHECK(r.den() == 4);
    CHECK(r.ToString() == "-3/4");
    CHECK(Rational(4, 2).ToString() == "2");
  }

  TEST_CASE("arithmetic is exact") {
    CHECK(Rational(1, 3) + Rational(2, 3) == Rational(1));
    CHECK(Rational(1, 3) * Rational(3, 4) == Rational(1, 4));
    CHECK(Rational(1) / Rational(2, 5) == Rational(5, 2));
    CHECK(Rational(1) / Rational(1, 5) == Rational(5));
    CHECK(Rational(1, 3) < Rational(1, 2));
  }

  TEST_CASE("from double recovers short decimals and thirds") {
    CHECK(Rational::FromDouble(0.4) == Rational(2, 5));
    CHECK(Rational::FromDouble(0.2) == Rational(1, 5));
    CHECK(Rational::FromDouble(0.33333333333333331) == Rational(1, 3));
    CHECK(Rational::FromDouble(-2.5) == Rational(-5, 2));
    CHECK(Rational::FromDouble(120.0) == Rational(120));
    CHECK(Rational::FromDouble(0.0).IsZero());
  }

  TEST_CASE("from double round-trips through ToDouble") {
    for (double v : {0.1, 0.05, 0.9, 1.0 / 3.0, 2.0 / 7.0, 3.75, -0.125, 1e-6}) {
      CHECK(Rational::FromDouble(v).ToDouble() == v);
    }
  }

  TEST_CASE("from double picks the smallest exact denominator") {
    CHECK(Rational::FromDouble(10.0 / 9.0) == Rational(10, 9));
    CHECK(Rational::FromDouble(-0.075) == Rational(-3, 40));
    CHECK(Rational::FromDouble(400.0 / 441.0) == Rational(400, 441));
  }

  TEST_CASE("from double falls back to a close fraction under the cap") {
    // No fraction with denominator <= 1e12 rounds to this double.
    const double v = 1.0 / 1.1025;
    const Rational r = Rational::FromDouble(v);
    CHECK(r.den() <= 1'000'000'000'000);
    CHECK(std::fabs(r.ToDouble() - v) <= 1e-15);
  }

  TEST_CASE("overflow throws instead of wrapping") {
    const Rational big(INT64_MAX / 2 + 1);
    CHECK_THROWS_AS(big * Rational(4), std::overflow_error);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  }
}
