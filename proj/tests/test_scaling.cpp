#include "generators.hpp"
#include "oracles.hpp"
#include "redistrib/clarke.hpp"
#include "redistrib/scaling.hpp"
#include "redistrib/wco.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace redistrib;

namespace {

std::vector<Rational> R(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.push_back(Rational(x));
  return out;
}

std::vector<Rational> random_gamma(std::mt19937_64& rng, std::size_t p) {
  std::vector<Rational> g(p);
  for (auto& x : g) x = Rational(static_cast<long>(rng() % 64 + 1), 8);
  std::sort(g.begin(), g.end(), std::greater<>());
  return g;
}

std::vector<Rational> random_sorted(std::mt19937_64& rng, std::size_t n, long top) {
  std::vector<Rational> v(n);
  for (auto& x : v) x = Rational(static_cast<long>(rng() % static_cast<std::uint64_t>(top + 1)));
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

Rational sum(const std::vector<Rational>& xs) {
  Rational s = 0;
  for (const auto& x : xs) s += x;
  return s;
}

}  // namespace

TEST(ScalingPayments, Examples) {
  const auto g11 = R({1, 1});
  const auto v5 = R({10, 8, 5, 3, 2});
  EXPECT_EQ(scaling_payments<Rational>(g11, v5), R({5, 5, 0, 0, 0}));
  const auto g21 = R({2, 1});
  const auto v3 = R({10, 8, 5});
  const auto t = scaling_payments<Rational>(g21, v3);
  EXPECT_EQ(t, R({13, 5, 0}));
  EXPECT_EQ(sum(t), 18);
  EXPECT_EQ(scaling_payments<Rational>(g21, R({0, 0, 0, 0})), R({0, 0, 0, 0}));
  EXPECT_THROW(scaling_payments<Rational>(g21, R({1, 2, 0})), Error);
}

TEST(ScalingPayments, AgreeWithClarkeOnInducedProfile) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t p = gen::between(rng, 1, 4);
    const std::size_t n = gen::between(rng, p, 9);
    std::vector<double> gamma(p);
    for (auto& x : gamma) x = static_cast<double>(rng() % 64 + 1) / 8.0;
    std::sort(gamma.begin(), gamma.end(), std::greater<>());
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(rng() % 100000) / 1024.0;
    std::sort(v.begin(), v.end(), std::greater<>());
    const auto b = BidProfile::scaled(v, gamma);
    const auto clarke = clarke_payments(b);
    const auto t = scaling_payments<double>(gamma, v);
    double total = 0.0;
    for (double x : t) total += x;
    EXPECT_DOUBLE_EQ(total, clarke.surplus);
    if (std::adjacent_find(v.begin(), v.end()) == v.end()) {
      for (std::size_t i = 0; i < n; ++i) EXPECT_DOUBLE_EQ(t[i], clarke.payments[i]) << "agent " << i;
    }
  }
}

TEST(ScalingModel, RejectsInvalidInstances) {
  EXPECT_THROW(ScalingModel(3, R({1, 1})), Error);
  EXPECT_THROW(ScalingModel(5, R({1, 2})), Error);
  EXPECT_THROW(ScalingModel(5, R({1, 0})), Error);
  EXPECT_THROW(ScalingModel(5, {}), Error);
  ScalingModel unsolved(5, R({2, 1}));
  EXPECT_THROW(scaling_rebates<Rational>(unsolved, R({5, 4, 3, 2, 1})), Error);
  EXPECT_FALSE(unsolved.certificate_holds());
}

TEST(ScalingModel, Beta) {
  const ScalingModel m(5, R({2, 1}));
  EXPECT_EQ(m.beta(), R({1, 3, 3, 3}));
  EXPECT_EQ(m.beta_at(0), 0);
  EXPECT_EQ(ScalingModel(5, R({1, 1})).beta(), R({0, 2, 2, 2}));
}

TEST(ScalingLp, EqualGammaGivesIdenticalObjectMechanism) {
  ScalingModel m(5, R({1, 1}));
  const auto& sol = m.solve();
  EXPECT_EQ(sol.e, Rational(5, 11));
  EXPECT_EQ(sol.c, (std::vector<Rational>{0, Rational(5, 11), Rational(-3, 11)}));
  ScalingModel m4(4, R({1, 1}));
  EXPECT_EQ(m4.solve().e, Rational(1, 4));
  for (std::size_t n = 3; n <= 14; ++n) {
    for (std::size_t p = 1; p + 1 < n; ++p) {
      ScalingModel eq(n, std::vector<Rational>(p, Rational(3, 2)));
      eq.solve();
      EXPECT_EQ(eq.solution()->e, wco_index(n, p)) << n << "," << p;
      EXPECT_TRUE(eq.certificate_holds());
    }
  }
}

TEST(ScalingLp, UnequalGammaMeetsBound) {
  ScalingModel m(5, R({2, 1}));
  const auto& sol = m.solve();
  EXPECT_EQ(sol.e, Rational(25, 33));
  EXPECT_EQ(scaling_index_bound(m), Rational(25, 33));
  EXPECT_TRUE(m.certificate_holds());
}

TEST(ScalingLp, BoundExamples) {
  EXPECT_EQ(scaling_index_bound(ScalingModel(5, R({1, 1}))), Rational(5, 11));
  EXPECT_EQ(scaling_index_bound(ScalingModel(5, R({2, 1}))), Rational(25, 33));
  for (std::size_t n = 3; n <= 12; ++n) {
    for (std::size_t p = 1; p + 1 < n; ++p) {
      const Rational b = scaling_index_bound(ScalingModel(n, std::vector<Rational>(p, Rational(1))));
      EXPECT_GE(b, 0);
      EXPECT_LE(b, 1);
    }
  }
}

TEST(ScalingLp, MatchesBisectionOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = gen::between(rng, 3, 14);
    const std::size_t p = gen::between(rng, 1, n - 2);
    const auto gamma = random_gamma(rng, p);
    ScalingModel m(n, gamma);
    const Rational e = m.solve().e;
    const auto beta = oracle::betas(static_cast<long>(n), gamma);
    ASSERT_EQ(beta, m.beta());
    const Rational approx = oracle::lp_bisect(static_cast<long>(n), beta);
    EXPECT_LE(e - approx, Rational(1, BigInt(1) << 59)) << "n=" << n << " p=" << p;
    EXPECT_GE(e, approx);
    EXPECT_TRUE(oracle::lp_feasible(static_cast<long>(n), beta, e));
    EXPECT_TRUE(m.certificate_holds());
    EXPECT_LE(e, scaling_index_bound(m));
    if (e < 1) {
      EXPECT_FALSE(oracle::lp_feasible(static_cast<long>(n), beta, e + Rational(1, 1'000'000'000'000)));
      EXPECT_FALSE(m.feasible(e + Rational(1, 1'000'000'000'000)));
    }
    EXPECT_TRUE(m.feasible(e));
    EXPECT_TRUE(m.feasible(e / 2));
  }
}

TEST(ScalingLp, SolutionShape) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = gen::between(rng, 3, 12);
    const std::size_t p = gen::between(rng, 1, n - 2);
    ScalingModel m(n, random_gamma(rng, p));
    const auto& sol = m.solve();
    ASSERT_EQ(sol.x.size(), n - 2);
    ASSERT_EQ(sol.c.size(), n - 2);
    Rational prefix = 0;
    for (std::size_t k = 0; k < sol.c.size(); ++k) {
      prefix += sol.c[k];
      EXPECT_EQ(prefix, sol.x[k]);
      EXPECT_GE(sol.x[k], 0);
    }
    EXPECT_GE(sol.e, 0);
    EXPECT_LE(sol.e, 1);
  }
}

TEST(ScalingRebates, Examples) {
  ScalingModel eq(5, R({1, 1}));
  eq.solve();
  const auto v = R({1, 1, 1, 0, 0});
  EXPECT_EQ(scaling_rebates<Rational>(eq, v), wco_rebates<Rational>(v, 2));
  EXPECT_EQ(scaling_rebates<Rational>(eq, R({0, 0, 0, 0, 0})), R({0, 0, 0, 0, 0}));

  ScalingModel m(5, R({2, 1}));
  m.solve();
  const auto ones = R({1, 1, 1, 1, 1});
  const Rational t = sum(scaling_payments<Rational>(m.gamma(), ones));
  const Rational f = sum(scaling_rebates<Rational>(m, ones)) / t;
  EXPECT_GE(f, m.solution()->e);
  EXPECT_LE(f, 1);
  EXPECT_THROW(scaling_rebates<Rational>(m, R({1, 2, 0, 0, 0})), Error);
  EXPECT_THROW(scaling_rebates<Rational>(m, R({1, 0})), Error);
}

TEST(ScalingRebates, EqualGammaReproducesIdenticalObjectRebates) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = gen::between(rng, 3, 10);
    const std::size_t p = gen::between(rng, 1, n - 2);
    ScalingModel m(n, std::vector<Rational>(p, Rational(1)));
    m.solve();
    const auto v = random_sorted(rng, n, 20);
    EXPECT_EQ(scaling_rebates<Rational>(m, v), wco_rebates<Rational>(v, p));
  }
}

TEST(ScalingRebates, BoundedByIndexAndSurplus) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = gen::between(rng, 3, 12);
    const std::size_t p = gen::between(rng, 1, n - 2);
    ScalingModel m(n, random_gamma(rng, p));
    m.solve();
    const auto v = random_sorted(rng, n, 50);
    const auto r = scaling_rebates<Rational>(m, v);
    const Rational t = sum(scaling_payments<Rational>(m.gamma(), v));
    for (const auto& x : r) EXPECT_GE(x, 0);
    EXPECT_LE(sum(r), t);
    EXPECT_GE(sum(r), m.solution()->e * t);
  }
}

// Every constraint is a linear form in the sorted values; it is nonnegative on
// all sorted nonnegative inputs iff its coefficient vector is prefix dominant.
TEST(ScalingRebates, ConstraintFormsArePrefixDominant) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = gen::between(rng, 3, 12);
    const std::size_t p = gen::between(rng, 1, n - 2);
    ScalingModel m(n, random_gamma(rng, p));
    m.solve();
    const Rational e = m.solution()->e;
    // value of each form at the prefix indicator with j ones
    auto forms_at = [&](std::size_t j) {
      std::vector<Rational> x(n, Rational(0));
      std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(j), Rational(1));
      const auto r = scaling_rebates<Rational>(m, x);
      const Rational t = sum(scaling_payments<Rational>(m.gamma(), x));
      std::vector<Rational> out(r.begin(), r.end());
      out.push_back(t - sum(r));
      out.push_back(sum(r) - e * t);
      return out;
    };
    const std::size_t forms = n + 2;
    std::vector<std::vector<Rational>> coef(forms, std::vector<Rational>(n));
    auto prev = forms_at(0);
    for (std::size_t j = 1; j <= n; ++j) {
      const auto cur = forms_at(j);
      for (std::size_t f = 0; f < forms; ++f) coef[f][j - 1] = cur[f] - prev[f];
      prev = cur;
    }
    for (std::size_t f = 0; f < forms; ++f) {
      EXPECT_TRUE(prefix_dominance<Rational>(coef[f])) << "form " << f << " n=" << n << " p=" << p;
    }
  }
}
