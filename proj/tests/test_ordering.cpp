#include "generators.hpp"
#include "redistrib/ordering.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace redistrib;

namespace {

std::size_t agents_above(const AgentRanking& r, std::size_t agent) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < r.relation.size(); ++j) {
    count += r.relation[j][agent] == Precedence::above ? 1 : 0;
  }
  return count;
}

BidProfile permute_objects(const BidProfile& b, const std::vector<std::size_t>& perm) {
  std::vector<double> bids(b.agents() * b.objects());
  for (std::size_t i = 0; i < b.agents(); ++i) {
    for (std::size_t j = 0; j < b.objects(); ++j) bids[i * b.objects() + j] = b(i, perm[j]);
  }
  return BidProfile(b.agents(), b.objects(), std::move(bids));
}

}  // namespace

TEST(RankAgents, FourAgentExample) {
  const auto r = rank_agents(BidProfile::from_rows({{4, 5}, {2, 1}, {1, 4}, {1, 0}}));
  EXPECT_EQ(r.classes, (std::vector<std::vector<std::size_t>>{{0}, {2}, {1}, {3}}));
  EXPECT_EQ(r.order(), (std::vector<std::size_t>{0, 2, 1, 3}));
  EXPECT_TRUE(r.transitive);
  EXPECT_EQ(r.relation[0][2], Precedence::above);
  EXPECT_EQ(r.relation[2][0], Precedence::below);
  EXPECT_EQ(r.class_of(3), 3U);
}

TEST(RankAgents, IdenticalRowsFormOneClass) {
  const auto r = rank_agents(BidProfile::from_rows({{3, 1, 2}, {3, 1, 2}, {3, 1, 2}, {3, 1, 2}}));
  EXPECT_EQ(r.classes, (std::vector<std::vector<std::size_t>>{{0, 1, 2, 3}}));
}

TEST(RankAgents, SingleObjectOrdersByValue) {
  const auto r = rank_agents(BidProfile::homogeneous(std::vector<double>{10, 8, 5}, 1));
  EXPECT_EQ(r.classes, (std::vector<std::vector<std::size_t>>{{0}, {1}, {2}}));
}

TEST(RankAgents, EnumerationCap) {
  const BidProfile big(12, 7, std::vector<double>(84, 1.0));
  EXPECT_THROW(rank_agents(big), Error);
  EXPECT_THROW(rank_agents(BidProfile::from_rows({{1, 2}, {2, 1}, {0, 0}}), 5), Error);
}

TEST(RankAgents, RelationIsTotalAndAntisymmetric) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const auto b = gen::any_profile(rng, gen::between(rng, 2, 6), gen::between(rng, 1, 3));
    const auto r = rank_agents(b);
    const std::size_t n = b.agents();
    std::size_t members = 0;
    for (const auto& c : r.classes) members += c.size();
    EXPECT_EQ(members, n);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(r.relation[i][i], Precedence::equivalent);
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(static_cast<int>(r.relation[i][j]), -static_cast<int>(r.relation[j][i]));
      }
    }
    if (!r.transitive) {
      ASSERT_TRUE(r.violation.has_value());
      const auto [a, m, c] = *r.violation;
      EXPECT_NE(r.relation[a][m], Precedence::below);
      EXPECT_NE(r.relation[m][c], Precedence::below);
      EXPECT_EQ(r.relation[a][c], Precedence::below);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto ci = r.class_of(i);
          const auto cj = r.class_of(j);
          const auto want = ci < cj ? Precedence::above : ci > cj ? Precedence::below : Precedence::equivalent;
          EXPECT_EQ(r.relation[i][j], want);
        }
      }
    }
  }
}

TEST(RankAgents, EqualRowsShareAClass) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = gen::between(rng, 2, 6);
    const std::size_t p = gen::between(rng, 1, 3);
    auto b = gen::integer_profile(rng, n, p, 9);
    const std::size_t i = rng() % n;
    const std::size_t j = (i + 1 + rng() % (n - 1)) % n;
    for (std::size_t k = 0; k < p; ++k) b = b.with_bid(j, k, b(i, k));
    const auto r = rank_agents(b);
    EXPECT_EQ(r.relation[i][j], Precedence::equivalent);
    EXPECT_EQ(r.class_of(i), r.class_of(j));
  }
}

TEST(RankAgents, InvariantUnderObjectPermutation) {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = gen::between(rng, 2, 3);
    const auto b = gen::any_profile(rng, gen::between(rng, 2, 6), p);
    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(rank_agents(b).classes, rank_agents(permute_objects(b, perm)).classes);
  }
}

TEST(RankAgents, TransitiveAndMonotoneForIdenticalObjects) {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = gen::between(rng, 2, 6);
    const std::size_t p = gen::between(rng, 1, 3);
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(rng() % 6);
    const auto r = rank_agents(BidProfile::homogeneous(v, p));
    ASSERT_TRUE(r.transitive);
    for (std::size_t i = 0; i < n && n > p; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto want = v[i] > v[j] ? Precedence::above : v[i] < v[j] ? Precedence::below : Precedence::equivalent;
        EXPECT_EQ(r.relation[i][j], want) << "trial " << trial << " agents " << i << "," << j;
      }
    }
    const std::size_t i = rng() % n;
    auto raised = v;
    raised[i] += static_cast<double>(1 + rng() % 3);
    EXPECT_LE(agents_above(rank_agents(BidProfile::homogeneous(raised, p)), i), agents_above(r, i));
  }
}

// Heterogeneous bids can produce a cycle: 1 beats 2, 2 beats 3, 3 beats 1.
// Agent 3 beats agent 1 because, once every allocation holding exactly one of
// them at values 2 and 1 turns out to hold both, the only survivor is a
// zero-valued allocation containing agent 3.
TEST(RankAgents, NotTransitiveInGeneral) {
  const auto r = rank_agents(BidProfile::from_rows({{1, 1}, {0, 1}, {1, 0}, {1, 0}}));
  EXPECT_EQ(r.relation[0][1], Precedence::above);
  EXPECT_EQ(r.relation[1][2], Precedence::above);
  EXPECT_EQ(r.relation[2][0], Precedence::above);
  EXPECT_FALSE(r.transitive);
  ASSERT_TRUE(r.violation.has_value());
}

// Raising agent 3's bid for object 2 from 2 to 3 lets agent 2 overtake it.
TEST(RankAgents, NotMonotoneInGeneral) {
  const auto before = rank_agents(BidProfile::from_rows({{0, 1}, {2, 0}, {2, 2}}));
  const auto after = rank_agents(BidProfile::from_rows({{0, 1}, {2, 0}, {2, 3}}));
  EXPECT_EQ(before.relation[2][1], Precedence::above);
  EXPECT_EQ(after.relation[2][1], Precedence::below);
  EXPECT_GT(agents_above(after, 2), agents_above(before, 2));
}
