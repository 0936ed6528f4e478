#include <cmath>

#include "fiflab/contraction.hpp"
#include "fiflab/expr.hpp"
#include "helpers.hpp"

using fiflab::ErrorCode;
using fiflab::expr::Expression;

TEST_CASE("arithmetic") {
  CHECK(Expression::parse("1 + 2 * 3")(0) == 7);
  CHECK(Expression::parse("(1 + 2) * 3")(0) == 9);
  CHECK(Expression::parse("2 ^ 3 ^ 2")(0) == 512);
  CHECK(Expression::parse("-y^2")(3) == -9);
  CHECK(Expression::parse("y / 4 - 1")(2) == -0.5);
  CHECK(Expression::parse("t + x + y")(1) == 3);
  CHECK(Expression::parse("1e-3 * 2")(0) == 0.002);
}

TEST_CASE("functions") {
  CHECK(Expression::parse("abs(y)")(-2) == 2);
  CHECK(Expression::parse("sqrt(y)")(16) == 4);
  CHECK(Expression::parse("max(y, 1) + min(y, 1)")(3) == 4);
  CHECK(Expression::parse("log(exp(y))")(1.5) == doctest::Approx(1.5));
}

TEST_CASE("conditionals reproduce the continuous example") {
  const auto e = Expression::parse(
      "if y <= 4 then 0 else if y <= 5 then 2*y - 8 else if y <= 7 then -y/2 + 9/2 "
      "else if y <= 8 then 8 - y else 0");
  for (int i = -20; i <= 140; ++i) {
    const double y = i / 10.0;
    CHECK(e(y) == doctest::Approx(fiflab::contraction::example_T_continuous(y)).epsilon(1e-15));
  }
  const auto c = Expression::parse("if 4<=y<=5 then 1 else 0");
  CHECK(c(4) == 1);
  CHECK(c(5) == 1);
  CHECK(c(5.01) == 0);
  CHECK(c(3.99) == 0);
  CHECK(Expression::parse("if y > 1 then 1 else 2")(1) == 2);
  CHECK(Expression::parse("if y >= 1 then 1 else 2")(1) == 1);
}

TEST_CASE("parse errors") {
  for (const char* bad : {"", "1 +", "(1", "foo(2)", "if y then 1 else 2", "y y", "max(1)", "1 ? 2"})
    CHECK_CODE(Expression::parse(bad), ErrorCode::ParseError);
}
