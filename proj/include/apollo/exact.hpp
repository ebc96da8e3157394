#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "apollo/errors.hpp"

namespace apollo {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

/// num / den for any nonzero den (the rational constructor rejects negative denominators).
inline Rational ratio(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("zero denominator");
  return den < 0 ? Rational(Integer(-num), Integer(-den)) : Rational(num, den);
}

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(abs(a), abs(b));
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

/// Floor of a / b for b != 0.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;  // truncates toward zero
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer floor(const Rational& q) { return floor_div(numerator(q), denominator(q)); }

/// Largest r with r*r <= n (n >= 0).
inline Integer isqrt(const Integer& n) {
  if (n < 0) throw DomainError("isqrt of negative value");
  return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const Integer& n, Integer* root = nullptr) {
  if (n < 0) return false;
  Integer r = isqrt(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

/// Exact square root of a nonnegative rational, if it has one.
inline bool rational_sqrt(const Rational& q, Rational* root) {
  Integer a, b;
  if (!is_perfect_square(numerator(q), &a) || !is_perfect_square(denominator(q), &b)) return false;
  *root = Rational(a, b);
  return true;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const Integer& n) { return n.convert_to<double>(); }

inline std::string to_string(const Integer& n) { return n.str(); }

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline bool fits_int64(const Integer& n) {
  return n >= std::numeric_limits<std::int64_t>::min() &&
         n <= std::numeric_limits<std::int64_t>::max();
}

inline std::int64_t to_int64(const Integer& n) {
  if (!fits_int64(n)) throw ArithmeticOverflow("value " + n.str() + " exceeds 64 bits");
  return n.convert_to<std::int64_t>();
}

}  // namespace apollo
