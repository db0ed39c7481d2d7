#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace edgecache {

// Exact cost arithmetic. Every cost, threshold and parameter in the
// simulator is a rational with 64-bit numerator and denominator.
using Rational = boost::rational<std::int64_t>;

// Accepts "7", "-3", "0.35", "1/3", "2.5e-1".
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

// "p/q", or "p" when the denominator is one.
std::string to_exact_string(const Rational& r);

// Decimal rendering with 12 significant digits.
std::string to_decimal_string(const Rational& r);
std::string to_decimal_string(double v);

std::int64_t ceil_to_int(const Rational& r);
std::int64_t floor_to_int(const Rational& r);

}  // namespace edgecache
