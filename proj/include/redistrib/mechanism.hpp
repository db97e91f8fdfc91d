#pragma once

// Groves redistribution mechanisms: Clarke payments plus a rebate rule.

#include "redistrib/bid_profile.hpp"
#include "redistrib/clarke.hpp"
#include "redistrib/error.hpp"
#include "redistrib/rebates.hpp"
#include "redistrib/scaling.hpp"
#include "redistrib/wco.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace redistrib {

enum class Mechanism { wco, scaling, bailey_cavallo, hetero };

inline std::string_view to_string(Mechanism m) {
  switch (m) {
    case Mechanism::wco: return "wco";
    case Mechanism::scaling: return "scaling";
    case Mechanism::bailey_cavallo: return "bailey_cavallo";
    case Mechanism::hetero: return "hetero";
  }
  return "unknown";
}

inline Mechanism parse_mechanism(std::string_view name) {
  if (name == "wco") return Mechanism::wco;
  if (name == "scaling") return Mechanism::scaling;
  if (name == "bailey_cavallo" || name == "bc") return Mechanism::bailey_cavallo;
  if (name == "hetero") return Mechanism::hetero;
  throw Error(ErrorKind::invalid_argument, "unknown mechanism '" + std::string(name) + "'");
}

struct MechanismOutcome {
  Allocation allocation;
  std::vector<double> payments;
  std::vector<double> rebates;
  double surplus = 0.0;
  std::optional<double> fraction;  ///< sum of rebates over surplus; empty when surplus is 0
  std::vector<std::optional<double>> gamma_ratio;  ///< HETERO only

  double total_rebate() const { return std::accumulate(rebates.begin(), rebates.end(), 0.0); }
};

/// Coefficients a mechanism needs for one (n, p), computed once and shared.
class MechanismContext {
 public:
  MechanismContext(Mechanism mechanism, std::size_t n, std::size_t p, std::vector<double> gamma = {})
      : mechanism_(mechanism), n_(n), p_(p) {
    switch (mechanism) {
      case Mechanism::wco:
        wco_ = wco_coefficients(n, p);
        break;
      case Mechanism::hetero:
        hetero_ = hetero_alphas(n, p);
        break;
      case Mechanism::scaling: {
        require(gamma.size() == p, ErrorKind::invalid_argument,
                "scaling mechanism needs exactly p gamma values (got " + std::to_string(gamma.size()) + ")");
        gamma_ = gamma;
        scaling_.emplace(ScalingModel::from_doubles(n, gamma));
        scaling_->solve();
        break;
      }
      case Mechanism::bailey_cavallo:
        require(n >= 1, ErrorKind::precondition, "need at least one agent");
        break;
    }
  }

  Mechanism mechanism() const { return mechanism_; }
  std::size_t agents() const { return n_; }
  std::size_t objects() const { return p_; }
  const std::optional<RebateCoefficients>& wco() const { return wco_; }
  const std::optional<HeteroCoefficients>& hetero() const { return hetero_; }
  const std::optional<ScalingModel>& scaling() const { return scaling_; }
  const std::vector<double>& gamma() const { return gamma_; }

 private:
  Mechanism mechanism_;
  std::size_t n_;
  std::size_t p_;
  std::vector<double> gamma_;
  std::optional<RebateCoefficients> wco_;
  std::optional<HeteroCoefficients> hetero_;
  std::optional<ScalingModel> scaling_;
};

inline constexpr double kScalingFormTolerance = 1e-9;

/// Private signals v_i of a profile of the form b_ij = gamma_j * v_i.
inline std::vector<double> scaled_values(const BidProfile& profile, const std::vector<double>& gamma) {
  require(gamma.size() == profile.objects(), ErrorKind::invalid_argument, "gamma length must equal p");
  std::vector<double> v(profile.agents());
  for (std::size_t i = 0; i < profile.agents(); ++i) {
    v[i] = profile(i, 0) / gamma[0];
    for (std::size_t j = 0; j < profile.objects(); ++j) {
      const double expected = gamma[j] * v[i];
      require(std::abs(profile(i, j) - expected) <= kScalingFormTolerance * std::max(1.0, std::abs(expected)),
              ErrorKind::invalid_argument, "profile is not of the form b_ij = gamma_j * v_i");
    }
  }
  return v;
}

namespace detail {

inline std::vector<double> scaling_rebates_for_profile(const BidProfile& profile, const MechanismContext& ctx) {
  const auto v = scaled_values(profile, ctx.gamma());
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  std::vector<double> sorted;
  for (std::size_t i : order) {
    sorted.push_back(v[i]);
  }
  const auto r_sorted = scaling_rebates<double>(*ctx.scaling(), std::span<const double>(sorted));
  std::vector<double> r(v.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    r[order[k]] = r_sorted[k];
  }
  return r;
}

}  // namespace detail

inline MechanismOutcome evaluate(const BidProfile& profile, const MechanismContext& ctx, SurplusCache& cache) {
  require(profile.agents() == ctx.agents() && profile.objects() == ctx.objects(), ErrorKind::invalid_argument,
          "profile size does not match the mechanism's (n, p)");
  MechanismOutcome out;
  auto clarke = clarke_payments(profile, profile.everyone(), TieBreak::lexicographic, &cache);
  out.allocation = std::move(clarke.allocation);
  out.payments = std::move(clarke.payments);
  out.surplus = clarke.surplus;

  switch (ctx.mechanism()) {
    case Mechanism::wco: {
      const auto values = homogeneous_values(profile);
      out.rebates.clear();
      for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<double> others;
        for (std::size_t j = 0; j < values.size(); ++j) {
          if (j != i) {
            others.push_back(values[j]);
          }
        }
        out.rebates.push_back(wco_rebate<double>(std::move(others), *ctx.wco()));
      }
      break;
    }
    case Mechanism::scaling:
      out.rebates = detail::scaling_rebates_for_profile(profile, ctx);
      break;
    case Mechanism::bailey_cavallo:
      out.rebates = bailey_cavallo_rebates(profile, cache);
      break;
    case Mechanism::hetero: {
      HeteroDiagnostics diag;
      out.rebates = hetero_rebates(profile, *ctx.hetero(), cache, &diag);
      out.gamma_ratio = std::move(diag.gamma_ratio);
      break;
    }
  }
  if (out.surplus > 0.0) {
    out.fraction = out.total_rebate() / out.surplus;
  }
  return out;
}

inline MechanismOutcome evaluate(const BidProfile& profile, const MechanismContext& ctx) {
  SurplusCache cache(profile);
  return evaluate(profile, ctx, cache);
}

}  // namespace redistrib
