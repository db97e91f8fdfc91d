#pragma once

// Linear rebates when object values scale a single private signal:
// b_ij = gamma_j * v_i with public gamma_1 >= ... >= gamma_p > 0.

#include "redistrib/error.hpp"
#include "redistrib/rational.hpp"
#include "redistrib/wco.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace redistrib {

struct ScalingLpSolution {
  Rational e;               ///< optimal worst-case redistributed fraction
  std::vector<Rational> x;  ///< x_2 .. x_{n-1} (prefix sums of c)
  std::vector<Rational> c;  ///< c_2 .. c_{n-1}
};

class ScalingModel {
 public:
  ScalingModel(std::size_t n, std::vector<Rational> gamma) : n_(n), gamma_(std::move(gamma)) {
    const std::size_t p = gamma_.size();
    require(p >= 1, ErrorKind::invalid_argument, "gamma needs at least one entry");
    require(n_ > p + 1, ErrorKind::precondition,
            "scaling mechanism needs n > p + 1 (n = " + std::to_string(n_) + ", p = " + std::to_string(p) + ")");
    for (std::size_t j = 0; j < p; ++j) {
      require(gamma_[j] > 0, ErrorKind::invalid_argument, "gamma entries must be positive");
      require(j == 0 || gamma_[j] <= gamma_[j - 1], ErrorKind::invalid_argument, "gamma must be non-increasing");
    }
    // beta_1 = g1 - g2, beta_i = i (g_i - g_{i+1}) + beta_{i-1}; virtual objects have gamma 0
    beta_.resize(n_ - 1);
    for (std::size_t i = 1; i <= n_ - 1; ++i) {
      const Rational drop = gamma_at(i) - gamma_at(i + 1);
      beta_[i - 1] = Rational(static_cast<long>(i)) * drop + (i > 1 ? beta_[i - 2] : Rational(0));
    }
  }

  static ScalingModel from_doubles(std::size_t n, std::span<const double> gamma) {
    std::vector<Rational> g;
    g.reserve(gamma.size());
    for (double x : gamma) {
      g.push_back(to_rational(x));
    }
    return ScalingModel(n, std::move(g));
  }

  std::size_t agents() const { return n_; }
  std::size_t objects() const { return gamma_.size(); }
  const std::vector<Rational>& gamma() const { return gamma_; }

  /// gamma_j for 1-based j, zero beyond p.
  Rational gamma_at(std::size_t j) const { return j >= 1 && j <= gamma_.size() ? gamma_[j - 1] : Rational(0); }

  /// beta_1 .. beta_{n-1}.
  const std::vector<Rational>& beta() const { return beta_; }
  /// beta_i for 1-based i; beta_0 is taken as 0.
  Rational beta_at(std::size_t i) const { return i == 0 ? Rational(0) : beta_[i - 1]; }

  const std::optional<ScalingLpSolution>& solution() const { return solution_; }
  bool solved() const { return solution_.has_value(); }

  /// Solves the rebate LP exactly and stores (e*, x, c).
  const ScalingLpSolution& solve();

  /// Whether redistributed fraction `e` is attainable (exact interval propagation).
  bool feasible(const Rational& e) const;

  /// Checks every LP inequality at the stored solution in exact arithmetic.
  bool certificate_holds() const;

 private:
  struct Affine {
    Rational slope, intercept;  // slope * e + intercept
    Rational at(const Rational& e) const { return slope * e + intercept; }
  };

  // Row r (1-based, r = 1..n-1): (r+1) x_r + (n-r-1) x_{r+1}, with x_1 = 0.
  Rational left_coef(std::size_t r) const { return Rational(static_cast<long>(r + 1)); }
  Rational right_coef(std::size_t r) const { return Rational(static_cast<long>(n_ - r - 1)); }

  std::size_t n_;
  std::vector<Rational> gamma_;
  std::vector<Rational> beta_;
  std::optional<ScalingLpSolution> solution_;
};

inline bool ScalingModel::feasible(const Rational& e) const {
  if (e < 0) {
    return true;
  }
  // Variables x_2 .. x_{n-1}. lo/hi bound the projection of rows 1..s-1 (and
  // the single-variable part of row 1) onto x_s.
  const std::size_t last = n_ - 1;
  Rational lo = 0;
  std::optional<Rational> hi;
  for (std::size_t s = 2; s <= last; ++s) {
    if (s == 2) {
      // row 1 involves x_2 only
      const Rational b = right_coef(1);
      lo = std::max(lo, e * beta_at(1) / b);
      hi = beta_at(1) / b;
    }
    if (s == last) {
      const Rational a = left_coef(last);
      lo = std::max(lo, e * beta_at(last) / a);
      hi = hi ? std::min(*hi, beta_at(last) / a) : beta_at(last) / a;
    }
    if (hi && lo > *hi) {
      return false;
    }
    if (s == last) {
      break;
    }
    // row s couples x_s and x_{s+1}
    const Rational a = left_coef(s);
    const Rational b = right_coef(s);
    if (e * beta_at(s) > beta_at(s)) {
      return false;
    }
    Rational next_lo = 0;
    if (hi) {
      next_lo = std::max(next_lo, (e * beta_at(s) - a * *hi) / b);
    }
    Rational next_hi = (beta_at(s) - a * lo) / b;
    lo = next_lo;
    hi = next_hi;
  }
  return true;
}

inline const ScalingLpSolution& ScalingModel::solve() {
  const std::size_t last = n_ - 1;
  std::vector<Affine> lower{{0, 0}};
  std::vector<Affine> upper;
  // conditions f(e) <= g(e)
  std::vector<std::pair<Affine, Affine>> conditions;

  auto close_variable = [&] {
    for (const auto& l : lower) {
      for (const auto& u : upper) {
        conditions.push_back({l, u});
      }
    }
  };

  for (std::size_t s = 2; s <= last; ++s) {
    if (s == 2) {
      const Rational b = right_coef(1);
      lower.push_back({beta_at(1) / b, 0});
      upper.push_back({0, beta_at(1) / b});
    }
    if (s == last) {
      const Rational a = left_coef(last);
      lower.push_back({beta_at(last) / a, 0});
      upper.push_back({0, beta_at(last) / a});
    }
    close_variable();
    if (s == last) {
      break;
    }
    const Rational a = left_coef(s);
    const Rational b = right_coef(s);
    const Rational bs = beta_at(s);
    conditions.push_back({{bs, 0}, {0, bs}});  // e beta_s <= beta_s
    std::vector<Affine> next_lower{{0, 0}};
    for (const auto& u : upper) {
      next_lower.push_back({(bs - a * u.slope) / b, (-a * u.intercept) / b});
    }
    std::vector<Affine> next_upper;
    for (const auto& l : lower) {
      next_upper.push_back({(-a * l.slope) / b, (bs - a * l.intercept) / b});
    }
    lower = std::move(next_lower);
    upper = std::move(next_upper);
  }

  Rational best = 1;
  for (const auto& [f, g] : conditions) {
    const Rational d = f.slope - g.slope;
    const Rational rhs = g.intercept - f.intercept;
    if (d > 0) {
      best = std::min(best, rhs / d);
    }
  }
  require(best >= 0 && feasible(best), ErrorKind::precondition, "scaling LP has no feasible point");

  // Recover x at e*: forward intervals, then the lowest consistent value backwards.
  const Rational e = best;
  std::vector<Rational> lo(n_ + 1, Rational(0)), hi(n_ + 1, Rational(0));
  {
    Rational cur_lo = 0;
    std::optional<Rational> cur_hi;
    for (std::size_t s = 2; s <= last; ++s) {
      if (s == 2) {
        cur_lo = std::max(cur_lo, e * beta_at(1) / right_coef(1));
        cur_hi = beta_at(1) / right_coef(1);
      }
      if (s == last) {
        cur_lo = std::max(cur_lo, e * beta_at(last) / left_coef(last));
        cur_hi = std::min(*cur_hi, beta_at(last) / left_coef(last));
      }
      lo[s] = cur_lo;
      hi[s] = *cur_hi;
      if (s == last) {
        break;
      }
      const Rational a = left_coef(s);
      const Rational b = right_coef(s);
      const Rational next_lo = std::max(Rational(0), (e * beta_at(s) - a * *cur_hi) / b);
      cur_hi = (beta_at(s) - a * cur_lo) / b;
      cur_lo = next_lo;
    }
  }
  std::vector<Rational> x(n_ + 1, Rational(0));
  x[last] = lo[last];
  for (std::size_t s = last - 1; s >= 2; --s) {
    const Rational a = left_coef(s);
    const Rational b = right_coef(s);
    x[s] = std::max(lo[s], (e * beta_at(s) - b * x[s + 1]) / a);
  }

  ScalingLpSolution sol;
  sol.e = e;
  for (std::size_t s = 2; s <= last; ++s) {
    sol.x.push_back(x[s]);
    sol.c.push_back(s == 2 ? x[2] : x[s] - x[s - 1]);
  }
  solution_ = std::move(sol);
  require(certificate_holds(), ErrorKind::precondition, "scaling LP recovery produced an infeasible point");
  return *solution_;
}

inline bool ScalingModel::certificate_holds() const {
  if (!solution_) {
    return false;
  }
  const auto& sol = *solution_;
  auto x_at = [&](std::size_t s) -> Rational {
    if (s < 2 || s > n_ - 1) {
      return 0;
    }
    return sol.x[s - 2];
  };
  for (const auto& xs : sol.x) {
    if (xs < 0) {
      return false;
    }
  }
  for (std::size_t r = 1; r <= n_ - 1; ++r) {
    const Rational row = left_coef(r) * x_at(r) + right_coef(r) * x_at(r + 1);
    if (row < sol.e * beta_at(r) || row > beta_at(r)) {
      return false;
    }
  }
  return true;
}

/// Upper bound min(A/B, B/A) on the LP optimum, with
/// A = sum_{i odd} beta_{i-1} C(n, i), B = sum_{i even} beta_{i-1} C(n, i).
inline Rational scaling_index_bound(const ScalingModel& model) {
  const std::size_t n = model.agents();
  Rational a = 0;
  Rational b = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const Rational term = model.beta_at(i - 1) * rational_binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(i));
    (i % 2 == 1 ? a : b) += term;
  }
  require(a != 0 && b != 0, ErrorKind::undefined_bound, "bound undefined: A or B is zero");
  return std::min(a / b, b / a);
}

namespace detail {

template <typename T>
void check_sorted_values(std::span<const T> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(v[i] >= T(0), ErrorKind::invalid_argument, "values must be nonnegative");
    require(i == 0 || v[i] <= v[i - 1], ErrorKind::invalid_argument, "values must be sorted in decreasing order");
  }
}

}  // namespace detail

/// Clarke payments under assortative allocation: agent i (1-based, i <= p)
/// pays sum_{j=i}^{p} (gamma_j - gamma_{j+1}) v_{j+1}; others pay 0.
template <typename T>
std::vector<T> scaling_payments(std::span<const T> gamma, std::span<const T> v) {
  detail::check_sorted_values(v);
  const std::size_t n = v.size();
  const std::size_t p = gamma.size();
  auto g = [&](std::size_t j) { return j >= 1 && j <= p ? gamma[j - 1] : T(0); };
  auto val = [&](std::size_t i) { return i >= 1 && i <= n ? v[i - 1] : T(0); };
  std::vector<T> t(n, T(0));
  for (std::size_t i = 1; i <= std::min(n, p); ++i) {
    for (std::size_t j = i; j <= p; ++j) {
      t[i - 1] += (g(j) - g(j + 1)) * val(j + 1);
    }
  }
  return t;
}

/// r_i = c_2 v_2 + ... + c_{i-1} v_{i-1} + c_i v_{i+1} + ... + c_{n-1} v_n.
template <typename T>
std::vector<T> scaling_rebates(const ScalingModel& model, std::span<const T> v) {
  require(model.solved(), ErrorKind::precondition, "scaling model has not been solved");
  require(v.size() == model.agents(), ErrorKind::invalid_argument, "value vector length must equal n");
  detail::check_sorted_values(v);
  const std::size_t n = v.size();
  const auto& c = model.solution()->c;
  std::vector<T> coef(n + 1, T(0));  // coef[j] = c_j for j = 2..n-1
  for (std::size_t j = 2; j <= n - 1; ++j) {
    coef[j] = detail::convert_coefficient<T>(c[j - 2]);
  }
  std::vector<T> r(n, T(0));
  for (std::size_t i = 1; i <= n; ++i) {
    T total = T(0);
    for (std::size_t j = 1; j < i; ++j) {
      total += coef[j] * v[j - 1];
    }
    for (std::size_t j = i; j <= n - 1; ++j) {
      total += coef[j] * v[j];
    }
    r[i - 1] = total;
  }
  return r;
}

}  // namespace redistrib
