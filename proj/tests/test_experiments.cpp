#include "generators.hpp"
#include "redistrib/experiments.hpp"
#include "redistrib/io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace redistrib;

TEST(RandomProfile, DeterministicPerIndex) {
  EXPECT_EQ(random_profile(3, 2, 0, 100, 5, 7), random_profile(3, 2, 0, 100, 5, 7));
  EXPECT_FALSE(random_profile(3, 2, 0, 100, 5, 7) == random_profile(3, 2, 0, 100, 5, 8));
  EXPECT_FALSE(random_profile(3, 2, 0, 100, 5, 7) == random_profile(3, 2, 0, 100, 6, 7));
}

TEST(RandomProfile, RejectsBadBounds) {
  EXPECT_THROW(random_profile(3, 2, 0, 0, 1, 0), Error);
  EXPECT_THROW(random_profile(3, 2, 5, 1, 1, 0), Error);
  EXPECT_THROW(random_profile(3, 2, -1, 1, 1, 0), Error);
}

TEST(RandomProfile, EntriesUniformOnRange) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::uint64_t k = 0; k < 10'000; ++k) {
    const auto b = random_profile(5, 2, 0, 100, 3, k);
    for (double x : b.data()) {
      ASSERT_GE(x, 0.0);
      ASSERT_LT(x, 100.0);
      sum += x;
      ++count;
    }
  }
  EXPECT_NEAR(sum / static_cast<double>(count), 50.0, 1.5);
}

TEST(BinaryProfiles, CountsAndOrder) {
  EXPECT_EQ(binary_profile_count(5, 2), 1024U);
  EXPECT_EQ(binary_profile_count(6, 2), 4096U);
  const auto two = binary_profiles(2, 1);
  ASSERT_EQ(two.size(), 4U);
  EXPECT_EQ(two[0].data()[0], 0.0);
  EXPECT_EQ(two[1], BidProfile(2, 1, {0, 1}));
  EXPECT_EQ(two[2], BidProfile(2, 1, {1, 0}));
  EXPECT_EQ(two[3], BidProfile(2, 1, {1, 1}));
  EXPECT_THROW(binary_profile_count(9, 3), Error);
}

TEST(Evaluate, Examples) {
  const auto a = BidProfile::from_rows({{4, 5}, {2, 1}, {1, 4}, {1, 0}});
  const auto out = evaluate(a, MechanismContext(Mechanism::bailey_cavallo, 4, 2));
  ASSERT_TRUE(out.fraction.has_value());
  EXPECT_EQ(*out.fraction, 0.5);

  const BidProfile zero(5, 2, std::vector<double>(10, 0.0));
  for (auto m : {Mechanism::wco, Mechanism::bailey_cavallo, Mechanism::hetero}) {
    const auto z = evaluate(zero, MechanismContext(m, 5, 2));
    EXPECT_EQ(z.surplus, 0.0);
    EXPECT_FALSE(z.fraction.has_value());
  }

  const auto h = BidProfile::homogeneous(std::vector<double>{1, 1, 1, 0, 0}, 2);
  const auto het = evaluate(h, MechanismContext(Mechanism::hetero, 5, 2));
  const auto wco = evaluate(h, MechanismContext(Mechanism::wco, 5, 2));
  EXPECT_EQ(het.surplus, 2.0);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(het.rebates[i], wco.rebates[i], 1e-12);
  EXPECT_NEAR(*het.fraction, *wco.fraction, 1e-12);
}

TEST(Evaluate, ScalingMechanismOnInducedProfiles) {
  const std::vector<double> gamma{2, 1};
  const MechanismContext ctx(Mechanism::scaling, 5, 2, gamma);
  const auto b = BidProfile::scaled(std::vector<double>{3, 5, 1, 4, 2}, gamma);
  const auto out = evaluate(b, ctx);
  ASSERT_TRUE(out.fraction.has_value());
  EXPECT_GE(*out.fraction, to_double(ctx.scaling()->solution()->e) - 1e-12);
  EXPECT_LE(*out.fraction, 1.0 + 1e-12);
  // rebates follow the agents, not the sorted positions
  const auto sorted = BidProfile::scaled(std::vector<double>{5, 4, 3, 2, 1}, gamma);
  const auto ref = evaluate(sorted, ctx);
  EXPECT_DOUBLE_EQ(out.rebates[1], ref.rebates[0]);
  EXPECT_DOUBLE_EQ(out.rebates[2], ref.rebates[4]);
  EXPECT_THROW(evaluate(BidProfile::from_rows({{1, 1}, {2, 0}, {0, 0}, {0, 0}, {0, 0}}), ctx), Error);
  EXPECT_THROW(MechanismContext(Mechanism::scaling, 5, 2, {1}), Error);
}

TEST(Evaluate, ContextMustMatchProfile) {
  EXPECT_THROW(evaluate(BidProfile(4, 2, std::vector<double>(8, 1.0)), MechanismContext(Mechanism::hetero, 5, 2)),
               Error);
  EXPECT_THROW(MechanismContext(Mechanism::hetero, 3, 2), Error);
  EXPECT_THROW(evaluate(BidProfile::from_rows({{1, 2}, {1, 1}, {0, 0}}), MechanismContext(Mechanism::wco, 3, 2)),
               Error);
}

TEST(WorstCaseIndex, BinaryStreamReachesIdenticalObjectIndex) {
  ExperimentConfig cfg;
  cfg.n = 5;
  cfg.p = 2;
  cfg.mechanism = Mechanism::hetero;
  cfg.generator.kind = Generator::Kind::binary;
  const auto report = worst_case_index(cfg);
  EXPECT_EQ(report.profiles_evaluated, 1024U);
  ASSERT_TRUE(report.min_fraction.has_value());
  EXPECT_NEAR(*report.min_fraction, 5.0 / 11.0, 1e-9);
  EXPECT_EQ(report.ir_violations, 0U);
  EXPECT_EQ(report.feasibility_violations, 0U);
  EXPECT_EQ(report.pivotal_violations, 0U);
  ASSERT_TRUE(report.witness.has_value());
  EXPECT_EQ(*report.witness, binary_profile(5, 2, *report.witness_index));

  cfg.mechanism = Mechanism::wco;
  cfg.generator.kind = Generator::Kind::homogeneous_binary;
  const auto wco = worst_case_index(cfg);
  EXPECT_EQ(wco.profiles_evaluated, 32U);
  EXPECT_NEAR(*wco.min_fraction, 5.0 / 11.0, 1e-12);
  EXPECT_EQ(wco.hard_failures(), 0U);
}

TEST(WorstCaseIndex, AllZeroStreamHasNoPositiveSurplus) {
  ExperimentConfig cfg;
  cfg.n = 4;
  cfg.p = 2;
  cfg.mechanism = Mechanism::bailey_cavallo;
  cfg.generator.kind = Generator::Kind::profiles;
  cfg.generator.fixed.assign(3, BidProfile(4, 2, std::vector<double>(8, 0.0)));
  const auto report = worst_case_index(cfg);
  EXPECT_FALSE(report.has_positive_surplus());
  EXPECT_EQ(report.zero_surplus_skipped, 3U);
  EXPECT_FALSE(report.witness.has_value());
}

TEST(WorstCaseIndex, ValidatesConfiguration) {
  ExperimentConfig cfg;
  cfg.n = 5;
  cfg.p = 2;
  cfg.generator = {Generator::Kind::uniform, 3, 3, {}};
  EXPECT_THROW(worst_case_index(cfg), Error);
  cfg.generator = {Generator::Kind::binary, 0, 1, {}};
  cfg.n = 14;
  EXPECT_THROW(worst_case_index(cfg), Error);
  cfg.n = 5;
  cfg.generator = {Generator::Kind::profiles, 0, 1, {BidProfile(4, 2, std::vector<double>(8, 0.0))}};
  EXPECT_THROW(worst_case_index(cfg), Error);
}

TEST(WorstCaseIndex, ReportIndependentOfWorkerCount) {
  for (auto mech : {Mechanism::hetero, Mechanism::bailey_cavallo}) {
    ExperimentConfig cfg;
    cfg.n = 7;
    cfg.p = 2;
    cfg.mechanism = mech;
    cfg.trials = 700;
    cfg.seed = 99;
    cfg.chunk = 64;
    cfg.workers = 1;
    const auto one = io::to_json(worst_case_index(cfg), cfg);
    cfg.workers = 4;
    auto many = io::to_json(worst_case_index(cfg), cfg);
    EXPECT_EQ(one.dump(), many.dump());
  }
}

TEST(WorstCaseIndex, ScaledStreamRespectsIndex) {
  ExperimentConfig cfg;
  cfg.n = 6;
  cfg.p = 2;
  cfg.mechanism = Mechanism::scaling;
  cfg.gamma = {3, 1};
  cfg.generator.kind = Generator::Kind::scaled_uniform;
  cfg.trials = 300;
  const auto report = worst_case_index(cfg);
  EXPECT_EQ(report.hard_failures(), 0U);
  const MechanismContext ctx(Mechanism::scaling, 6, 2, cfg.gamma);
  EXPECT_GE(*report.min_fraction, to_double(ctx.scaling()->solution()->e) - 1e-9);
}

TEST(Adversarial, ProfilesAndSurplus) {
  EXPECT_EQ(adversarial_profile(4, 2), BidProfile::from_rows({{3, 2}, {2, 1}, {0, 0}, {0, 0}}));
  EXPECT_EQ(clarke_payments(adversarial_profile(4, 2)).surplus, 1.0);
  EXPECT_EQ(clarke_payments(adversarial_profile(5, 3)).surplus, 3.0);
  EXPECT_EQ(clarke_payments(adversarial_profile(6, 4)).surplus, 6.0);
  EXPECT_THROW(adversarial_profile(4, 1), Error);
  EXPECT_THROW(adversarial_profile(3, 3), Error);
}

TEST(Adversarial, LinearRebatesVanish) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> d(-5, 5);
  for (std::size_t p = 2; p <= 5; ++p) {
    for (std::size_t n = p + 2; n <= p + 4; ++n) {
      const auto b = adversarial_profile(n, p);
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> c(n - p - 1, std::vector<double>(p));
        for (auto& row : c) {
          for (auto& x : row) x = d(rng);
        }
        for (double r : linear_rebates(b, order, c)) EXPECT_EQ(r, 0.0);
      }
    }
  }
}

TEST(BcHeteroComparison, RowsAndBounds) {
  const auto result = compare_bc_hetero(6, {1, 2, 4, 5}, 40, 3, 2);
  std::size_t hetero_rows = 0;
  for (const auto& row : result.rows) {
    EXPECT_GE(row.worst_fraction, -1e-9);
    EXPECT_LE(row.worst_fraction, 1.0 + 1e-9);
    EXPECT_EQ(row.trials, 40U);
    EXPECT_EQ(row.seed, 3U);
    hetero_rows += row.mechanism == "hetero" ? 1 : 0;
  }
  EXPECT_EQ(hetero_rows, 3U);  // p = 5 leaves no room for HETERO at n = 6
  EXPECT_EQ(result.comparisons.size(), 3U);
  const auto csv = io::comparison_csv(result);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,mech,worst_fraction,mean_fraction,trials,seed");
  EXPECT_EQ(io::comparison_csv(compare_bc_hetero(6, {1, 2, 4, 5}, 40, 3, 1)), csv);
  EXPECT_THROW(compare_bc_hetero(6, {6}, 10, 1), Error);
}
