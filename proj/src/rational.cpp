#include "edgecache/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace edgecache {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw std::overflow_error("rational literal out of range");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw std::overflow_error("rational literal out of range");
  }
  return out;
}

std::int64_t pow10(int e) {
  std::int64_t out = 1;
  for (int i = 0; i < e; ++i) out = checked_mul(out, 10);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::int64_t mantissa = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '.') {
      if (seen_dot) break;
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      seen_digit = true;
      mantissa = checked_add(checked_mul(mantissa, 10), ch - '0');
      if (seen_dot) ++frac_digits;
    } else {
      break;
    }
  }
  if (!seen_digit) throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  int exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') {
      throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
    }
    const std::string exp_text(s.substr(i + 1));
    std::size_t used = 0;
    try {
      exponent = std::stoi(exp_text, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in '" + std::string(whole) + "'");
    }
    if (used != exp_text.size() || exponent > 18 || exponent < -18) {
      throw std::invalid_argument("bad exponent in '" + std::string(whole) + "'");
    }
  }
  const int scale = exponent - frac_digits;
  Rational value = scale >= 0 ? Rational(checked_mul(mantissa, pow10(scale)))
                              : Rational(mantissa, pow10(-scale));
  return negative ? -value : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_decimal(trim(s.substr(0, slash)), s);
    const Rational den = parse_decimal(trim(s.substr(slash + 1)), s);
    if (den == Rational(0)) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    return num / den;
  }
  return parse_decimal(s, s);
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_exact_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_decimal_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string to_decimal_string(const Rational& r) {
  // long double keeps the 12 printed digits stable for large numerators
  const long double v =
      static_cast<long double>(r.numerator()) / static_cast<long double>(r.denominator());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Lg", v);
  return buf;
}

std::int64_t floor_to_int(const Rational& r) {
  const std::int64_t n = r.numerator();
  const std::int64_t d = r.denominator();
  std::int64_t q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

std::int64_t ceil_to_int(const Rational& r) {
  const std::int64_t n = r.numerator();
  const std::int64_t d = r.denominator();
  std::int64_t q = n / d;
  if ((n % d != 0) && (n > 0)) ++q;
  return q;
}

}  // namespace edgecache
