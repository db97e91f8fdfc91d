#pragma once

// Exact rational arithmetic used for rebate coefficients and exact checks.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace redistrib {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::number<boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
                                               boost::multiprecision::et_off>;

inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) {
    return 0;
  }
  if (k > n - k) {
    k = n - k;
  }
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

inline Rational rational_binomial(std::int64_t n, std::int64_t k) {
  return Rational(binomial(n, k));
}

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Exact value of a finite double: every double is a dyadic rational.
inline Rational to_rational(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("to_rational: non-finite value");
  }
  if (x == 0.0) {
    return Rational(0);
  }
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, |mantissa| in [0.5, 1)
  constexpr int kBits = std::numeric_limits<double>::digits;
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, kBits));
  exponent -= kBits;
  BigInt num = scaled;
  BigInt den = 1;
  if (exponent >= 0) {
    num <<= exponent;
  } else {
    den <<= -exponent;
  }
  return Rational(num, den);
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace redistrib
