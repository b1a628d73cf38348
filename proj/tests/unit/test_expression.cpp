#include <cmath>

#include "doctest.h"
#include "equispec/error.hpp"
#include "equispec/expression.hpp"

using equispec::Expression;

TEST_SUITE("expression") {
  TEST_CASE("precedence and associativity") {
    CHECK(Expression::parse("1 + 2 * 3").eval(0, 0, 0) == 7.0);
    CHECK(Expression::parse("2 ^ 3 ^ 2").eval(0, 0, 0) == 512.0);
    CHECK(Expression::parse("-2 ^ 2").eval(0, 0, 0) == -4.0);
    CHECK(Expression::parse("(1 + 2) * 3").eval(0, 0, 0) == 9.0);
    CHECK(Expression::parse("8 / 4 / 2").eval(0, 0, 0) == 1.0);
  }

  TEST_CASE("variables and functions") {
    const Expression e = Expression::parse("x^2 + y^2 + z^2");
    CHECK(e.eval(1, 2, 3) == 14.0);
    CHECK(Expression::parse("cos(pi)").eval(0, 0, 0) == doctest::Approx(-1.0));
    CHECK(Expression::parse("atan2(y, x)").eval(0, 1, 0) == doctest::Approx(std::acos(0.0)));
    CHECK(Expression::parse("max(x, min(y, z))").eval(1, 5, 3) == 3.0);
    CHECK(Expression::parse("cosh(0) + exp(0) + log(e)").eval(0, 0, 0) == doctest::Approx(3.0));
  }

  TEST_CASE("predicates") {
    const Expression p = Expression::parse("abs(x) < 1e-9 && z > 0");
    CHECK(p.eval(0, 0, 1) == 1.0);
    CHECK(p.eval(0, 0, -1) == 0.0);
    CHECK(p.eval(0.1, 0, 1) == 0.0);
    CHECK(Expression::parse("!(x >= 1) || y == 2").eval(2, 2, 0) == 1.0);
  }

  TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(Expression::parse("1 +"), equispec::InvalidInput);
    CHECK_THROWS_AS(Expression::parse("foo(1)"), equispec::InvalidInput);
    CHECK_THROWS_AS(Expression::parse("w + 1"), equispec::InvalidInput);
    CHECK_THROWS_AS(Expression::parse("(1"), equispec::InvalidInput);
    CHECK_THROWS_AS(Expression::parse(""), equispec::InvalidInput);
  }
}
