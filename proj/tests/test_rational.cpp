#include <doctest.h>

#include "edgecache/rational.hpp"

using edgecache::Rational;
using edgecache::parse_rational;

TEST_CASE("rational literals") {
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(parse_rational("0.35") == Rational(7, 20));
  CHECK(parse_rational(" 1/3 ") == Rational(1, 3));
  CHECK(parse_rational("2.5e-1") == Rational(1, 4));
  CHECK(parse_rational("1.5/0.5") == Rational(3));
  CHECK_THROWS(parse_rational(""));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("99999999999999999999"));
}

TEST_CASE("rational rendering") {
  CHECK(edgecache::to_exact_string(Rational(9, 4)) == "9/4");
  CHECK(edgecache::to_exact_string(Rational(4)) == "4");
  CHECK(edgecache::to_decimal_string(Rational(1, 3)) == "0.333333333333");
  CHECK(edgecache::to_decimal_string(Rational(2)) == "2");
  CHECK(edgecache::floor_to_int(Rational(-7, 2)) == -4);
  CHECK(edgecache::ceil_to_int(Rational(7, 2)) == 4);
  CHECK(edgecache::ceil_to_int(Rational(-7, 2)) == -3);
}
