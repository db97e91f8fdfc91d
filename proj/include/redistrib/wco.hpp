#pragma once

// Worst-case optimal linear rebates for identical objects.

#include "redistrib/bid_profile.hpp"
#include "redistrib/error.hpp"
#include "redistrib/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace redistrib {

/// Linear rebate weights c_{first}..c_{first+size-1} applied to the other
/// agents' values sorted in decreasing order.
struct RebateCoefficients {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t first = 0;  ///< index carried by c.front()
  std::vector<Rational> c;

  /// c_index, zero outside the stored range.
  Rational at(std::size_t index) const {
    if (index < first || index >= first + c.size()) {
      return 0;
    }
    return c[index - first];
  }
};

namespace detail {

inline void check_homogeneous_size(std::size_t n, std::size_t p) {
  require(p >= 1 && n > p, ErrorKind::precondition,
          "need n > p >= 1 (n = " + std::to_string(n) + ", p = " + std::to_string(p) + ")");
}

template <typename T>
T convert_coefficient(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>) {
    return q;
  } else {
    return static_cast<T>(to_double(q));
  }
}

}  // namespace detail

/// c_i for i = p+1 .. n-1.
inline RebateCoefficients wco_coefficients(std::size_t n, std::size_t p) {
  detail::check_homogeneous_size(n, p);
  const auto N = static_cast<std::int64_t>(n);
  const auto P = static_cast<std::int64_t>(p);
  BigInt tail_total = 0;  // sum_{j=p}^{n-1} C(n-1, j)
  for (std::int64_t j = P; j <= N - 1; ++j) {
    tail_total += binomial(N - 1, j);
  }
  const BigInt scale = BigInt(N - P) * binomial(N - 1, P - 1);

  RebateCoefficients out{n, p, p + 1, {}};
  for (std::int64_t i = P + 1; i <= N - 1; ++i) {
    BigInt tail = 0;
    for (std::int64_t j = i; j <= N - 1; ++j) {
      tail += binomial(N - 1, j);
    }
    Rational ci(scale * tail, BigInt(i) * binomial(N - 1, i) * tail_total);
    if ((i + P - 1) % 2 != 0) {
      ci = -ci;
    }
    out.c.push_back(ci);
  }
  return out;
}

/// Worst-case redistributed fraction of the WCO mechanism:
/// e* = 1 - C(n-1, p) / sum_{j=p}^{n-1} C(n-1, j).
inline Rational wco_index(std::size_t n, std::size_t p) {
  detail::check_homogeneous_size(n, p);
  const auto N = static_cast<std::int64_t>(n);
  const auto P = static_cast<std::int64_t>(p);
  BigInt tail_total = 0;
  for (std::int64_t j = P; j <= N - 1; ++j) {
    tail_total += binomial(N - 1, j);
  }
  return Rational(1) - Rational(binomial(N - 1, P), tail_total);
}

/// Rebate to one agent given the other n-1 agents' values (any order).
template <typename T>
T wco_rebate(std::vector<T> others, const RebateCoefficients& coeffs) {
  require(others.size() + 1 == coeffs.n, ErrorKind::invalid_argument,
          "wco_rebate expects the values of the other n-1 agents");
  std::sort(others.begin(), others.end(), std::greater<T>());
  T rebate = T(0);
  for (std::size_t idx = 0; idx < coeffs.c.size(); ++idx) {
    // c_{p+1+idx} multiplies the (p+1+idx)-th largest other value
    rebate += detail::convert_coefficient<T>(coeffs.c[idx]) * others[coeffs.first + idx - 1];
  }
  return rebate;
}

/// Rebates for every agent of a homogeneous instance given scalar values.
template <typename T>
std::vector<T> wco_rebates(std::span<const T> values, std::size_t p) {
  const auto coeffs = wco_coefficients(values.size(), p);
  std::vector<T> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<T> others;
    others.reserve(values.size() - 1);
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (j != i) {
        others.push_back(values[j]);
      }
    }
    out.push_back(wco_rebate<T>(std::move(others), coeffs));
  }
  return out;
}

/// Scalar per-agent values of a profile whose rows are constant (exact check).
inline std::vector<double> homogeneous_values(const BidProfile& profile) {
  require(profile.is_homogeneous(), ErrorKind::invalid_argument,
          "profile rows are not constant; identical-object mechanism does not apply");
  std::vector<double> values;
  values.reserve(profile.agents());
  for (std::size_t i = 0; i < profile.agents(); ++i) {
    values.push_back(profile(i, 0));
  }
  return values;
}

inline std::vector<double> wco_rebates(const BidProfile& profile) {
  const auto values = homogeneous_values(profile);
  return wco_rebates<double>(std::span<const double>(values), profile.objects());
}

/// Homogeneous Clarke surplus p * v_{(p+1)} (zero when n <= p).
template <typename T>
T homogeneous_surplus(std::vector<T> values, std::size_t p) {
  if (values.size() <= p) {
    return T(0);
  }
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(p), values.end(), std::greater<T>());
  return T(static_cast<long>(p)) * values[p];
}

/// True iff sum_i a_i x_i >= 0 for every x_1 >= ... >= x_n >= 0, i.e. all
/// prefix sums of `a` are nonnegative.
template <typename T>
bool prefix_dominance(std::span<const T> a) {
  T prefix = T(0);
  for (const T& ai : a) {
    prefix += ai;
    if (prefix < T(0)) {
      return false;
    }
  }
  return true;
}

/// A sorted nonnegative x with sum a_i x_i < 0 (the indicator of the first
/// negative prefix), or nothing when `a` is prefix dominant.
template <typename T>
std::optional<std::vector<T>> prefix_dominance_witness(std::span<const T> a) {
  T prefix = T(0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    prefix += a[j];
    if (prefix < T(0)) {
      std::vector<T> x(a.size(), T(0));
      std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(j + 1), T(1));
      return x;
    }
  }
  return std::nullopt;
}

}  // namespace redistrib
