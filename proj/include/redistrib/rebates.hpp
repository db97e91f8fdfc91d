#pragma once

// Non-linear rebates built from subset Clarke surpluses.

#include "redistrib/bid_profile.hpp"
#include "redistrib/clarke.hpp"
#include "redistrib/error.hpp"
#include "redistrib/rational.hpp"
#include "redistrib/wco.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace redistrib {

inline constexpr std::size_t kMaxHeteroAgents = 16;

/// r_i = t^{-i} / n.
inline std::vector<double> bailey_cavallo_rebates(const BidProfile& profile, SurplusCache& cache) {
  const std::size_t n = profile.agents();
  std::vector<double> r(n, 0.0);
  if (n == 1) {
    return r;
  }
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = cache.surplus(profile.everyone().without(i)) / static_cast<double>(n);
  }
  return r;
}

inline std::vector<Rational> bailey_cavallo_rebates_exact(const BidProfile& profile, SurplusCache& cache) {
  const std::size_t n = profile.agents();
  std::vector<Rational> r(n, Rational(0));
  if (n == 1) {
    return r;
  }
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = to_rational(cache.surplus(profile.everyone().without(i))) / Rational(n);
  }
  return r;
}

/// Weights alpha_1..alpha_L (L = n - p - 1) on leave-k-out average surpluses.
struct HeteroCoefficients {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<Rational> alpha;

  std::size_t levels() const { return alpha.size(); }
};

namespace detail {

// Weight of x_{p+1+l} (others sorted decreasingly) in the homogeneous
// t^{-i,k-1}: p * C(p+l, p) * C(n-p-2-l, k-1-l) / C(n-1, k-1).
inline Rational homogeneous_average_weight(std::size_t n, std::size_t p, std::size_t k, std::size_t l) {
  const auto N = static_cast<std::int64_t>(n);
  const auto P = static_cast<std::int64_t>(p);
  const auto K = static_cast<std::int64_t>(k);
  const auto Lx = static_cast<std::int64_t>(l);
  return Rational(P * binomial(P + Lx, P) * binomial(N - P - 2 - Lx, K - 1 - Lx), binomial(N - 1, K - 1));
}

}  // namespace detail

/// Alphas that make HETERO coincide with WCO on identical objects: the
/// triangular system matching the coefficient of each sorted value, solved
/// from the smallest value upwards.
inline HeteroCoefficients hetero_alphas(std::size_t n, std::size_t p) {
  require(p >= 1 && n > p + 1, ErrorKind::precondition,
          "HETERO needs n > p + 1 (n = " + std::to_string(n) + ", p = " + std::to_string(p) + ")");
  const std::size_t levels = n - p - 1;
  const auto wco = wco_coefficients(n, p);
  HeteroCoefficients out{n, p, std::vector<Rational>(levels, Rational(0))};
  for (std::size_t l = levels; l-- > 0;) {
    Rational rest = 0;
    for (std::size_t k = l + 2; k <= levels; ++k) {
      rest += out.alpha[k - 1] * detail::homogeneous_average_weight(n, p, k, l);
    }
    out.alpha[l] = (wco.at(p + 1 + l) - rest) / detail::homogeneous_average_weight(n, p, l + 1, l);
  }
  return out;
}

/// t^{-i,k-1} for identical objects from the other agents' sorted values x
/// (x_1 >= ... >= x_{n-1}).
template <typename T>
T homogeneous_averaged_surplus_closed_form(std::size_t n, std::size_t p, std::size_t k, std::span<const T> x) {
  require(x.size() + 1 == n, ErrorKind::invalid_argument, "expected the n-1 other values");
  require(k >= 1 && n >= p + 1 + k, ErrorKind::precondition, "closed form needs 1 <= k <= n - p - 1");
  T total = T(0);
  for (std::size_t l = 0; l + 1 <= k; ++l) {
    total += detail::convert_coefficient<T>(detail::homogeneous_average_weight(n, p, k, l)) * x[p + l];
  }
  return total;
}

/// Per-agent Gamma_2 / Gamma_1 (leave-two-out average over leave-one-out
/// surplus); empty when Gamma_1 = 0 or fewer than two levels exist.
struct HeteroDiagnostics {
  std::vector<std::optional<double>> gamma_ratio;
};

namespace detail {

inline void check_hetero(const BidProfile& profile, const HeteroCoefficients& coeffs) {
  require(coeffs.n == profile.agents() && coeffs.p == profile.objects(), ErrorKind::invalid_argument,
          "HETERO coefficients were computed for a different (n, p)");
  require(profile.agents() <= kMaxHeteroAgents, ErrorKind::cap_exceeded,
          "HETERO evaluation is limited to " + std::to_string(kMaxHeteroAgents) + " agents");
}

}  // namespace detail

/// r_i = sum_k alpha_k t^{-i,k-1}.
inline std::vector<double> hetero_rebates(const BidProfile& profile, const HeteroCoefficients& coeffs,
                                          SurplusCache& cache, HeteroDiagnostics* diagnostics = nullptr) {
  detail::check_hetero(profile, coeffs);
  const std::size_t n = profile.agents();
  std::vector<double> alpha;
  for (const auto& a : coeffs.alpha) {
    alpha.push_back(to_double(a));
  }
  std::vector<double> r(n, 0.0);
  if (diagnostics != nullptr) {
    diagnostics->gamma_ratio.assign(n, std::nullopt);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    double first = 0.0;
    for (std::size_t k = 1; k <= alpha.size(); ++k) {
      const double level = averaged_surplus(profile, i, k - 1, cache);
      if (k == 1) {
        first = level;
      } else if (k == 2 && diagnostics != nullptr && first > 0.0) {
        diagnostics->gamma_ratio[i] = level / first;
      }
      total += alpha[k - 1] * level;
    }
    r[i] = total;
  }
  return r;
}

/// Same rebates in exact arithmetic (surpluses are taken as exact doubles).
inline std::vector<Rational> hetero_rebates_exact(const BidProfile& profile, const HeteroCoefficients& coeffs,
                                                  SurplusCache& cache) {
  detail::check_hetero(profile, coeffs);
  const std::size_t n = profile.agents();
  std::vector<Rational> r(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k <= coeffs.levels(); ++k) {
      r[i] += coeffs.alpha[k - 1] * averaged_surplus_exact(profile, i, k - 1, cache);
    }
  }
  return r;
}

}  // namespace redistrib
