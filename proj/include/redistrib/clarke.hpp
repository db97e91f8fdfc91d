#pragma once

// Clarke pivotal payments and surpluses of agent subsets.

#include "redistrib/agent_set.hpp"
#include "redistrib/bid_profile.hpp"
#include "redistrib/core.hpp"
#include "redistrib/error.hpp"
#include "redistrib/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace redistrib {

/// Memo of optimal values and Clarke surpluses keyed by the set of PRESENT
/// agents of one profile. Not synchronized: confine each cache to one thread.
class SurplusCache {
 public:
  /// Profiles up to this many agents use dense storage indexed by the agent mask.
  static constexpr std::size_t kDenseAgents = 16;

  explicit SurplusCache(const BidProfile& profile) : profile_(&profile) {
    if (profile.agents() <= kDenseAgents) {
      const std::size_t slots = std::size_t{1} << profile.agents();
      dense_values_.assign(slots, kMissing);
      dense_surpluses_.assign(slots, kMissing);
    }
  }

  const BidProfile& profile() const { return *profile_; }

  /// v(k*) restricted to `present`.
  double optimal_value(AgentSet present) {
    if (present.empty()) {
      return 0.0;
    }
    if (const double* hit = find(dense_values_, values_, present)) {
      return *hit;
    }
    const double v = redistrib::optimal_value(*profile_, present);
    store(dense_values_, values_, present, v);
    return v;
  }

  /// Total Clarke payment collected when only `present` agents participate.
  double surplus(AgentSet present) {
    require(!present.empty(), ErrorKind::precondition, "surplus needs a non-empty agent set");
    if (const double* hit = find(dense_surpluses_, surpluses_, present)) {
      return *hit;
    }
    const Allocation best = any_optimal_allocation(*profile_, present);
    store(dense_values_, values_, present, best.value);
    double total = 0.0;
    for (const auto& a : best.pairs) {
      total += (*profile_)(a.agent, a.object) - best.value + optimal_value(present.without(a.agent));
    }
    store(dense_surpluses_, surpluses_, present, total);
    ++computed_;
    return total;
  }

  /// Distinct subsets whose surplus has been computed.
  std::size_t cached_surpluses() const { return computed_; }

 private:
  static constexpr double kMissing = -1.0;  // surpluses and values are never negative

  static const double* find(const std::vector<double>& dense, const std::unordered_map<std::uint64_t, double>& sparse,
                            AgentSet key) {
    if (!dense.empty()) {
      const double& slot = dense[key.bits()];
      return slot == kMissing ? nullptr : &slot;
    }
    const auto it = sparse.find(key.bits());
    return it == sparse.end() ? nullptr : &it->second;
  }

  static void store(std::vector<double>& dense, std::unordered_map<std::uint64_t, double>& sparse, AgentSet key,
                    double value) {
    if (!dense.empty()) {
      dense[key.bits()] = value;
    } else {
      sparse.emplace(key.bits(), value);
    }
  }

  const BidProfile* profile_;
  std::vector<double> dense_values_;
  std::vector<double> dense_surpluses_;
  std::unordered_map<std::uint64_t, double> values_;
  std::unordered_map<std::uint64_t, double> surpluses_;
  std::size_t computed_ = 0;
};

struct ClarkeOutcome {
  Allocation allocation;
  std::vector<double> payments;  ///< length n; zero for absent agents and non-winners
  double surplus = 0.0;
};

/// t_i = v_i(k*) - (v(k*) - v(k*_{-i})) for every present agent. When a
/// cache is given it supplies the leave-one-out optimal values.
inline ClarkeOutcome clarke_payments(const BidProfile& profile, AgentSet present,
                                     TieBreak tie_break = TieBreak::lexicographic, SurplusCache* cache = nullptr) {
  require(!present.empty(), ErrorKind::precondition, "clarke_payments needs a non-empty agent set");
  require(present.is_subset_of(profile.everyone()), ErrorKind::precondition, "agent set outside the profile");
  ClarkeOutcome out;
  out.allocation = optimal_allocation(profile, profile.everyone() - present, tie_break);
  out.payments.assign(profile.agents(), 0.0);
  const double total = out.allocation.value;
  for (const auto& a : out.allocation.pairs) {
    const AgentSet rest = present.without(a.agent);
    const double without = cache != nullptr ? cache->optimal_value(rest) : optimal_value(profile, rest);
    out.payments[a.agent] = profile(a.agent, a.object) - total + without;
  }
  for (double t : out.payments) {
    out.surplus += t;
  }
  return out;
}

inline ClarkeOutcome clarke_payments(const BidProfile& profile) {
  return clarke_payments(profile, profile.everyone());
}

inline double clarke_surplus(const BidProfile& profile, AgentSet present, SurplusCache* cache = nullptr) {
  if (cache != nullptr) {
    require(&cache->profile() == &profile, ErrorKind::invalid_argument, "cache belongs to a different profile");
    return cache->surplus(present);
  }
  SurplusCache scratch(profile);
  return scratch.surplus(present);
}

namespace detail {

inline void check_averaging_range(const BidProfile& profile, std::size_t agent, std::size_t k) {
  const std::size_t n = profile.agents();
  const std::size_t p = profile.objects();
  require(agent < n, ErrorKind::precondition, "agent index out of range");
  require(n >= p + 2 && k <= n - p - 2, ErrorKind::precondition,
          "averaged surplus needs 0 <= k <= n - p - 2 (k = " + std::to_string(k) + ")");
}

}  // namespace detail

/// t^{-i,k}: mean surplus over all ways to remove agent i together with k others.
inline double averaged_surplus(const BidProfile& profile, std::size_t agent, std::size_t k, SurplusCache& cache) {
  detail::check_averaging_range(profile, agent, k);
  const AgentSet others = profile.everyone().without(agent);
  double sum = 0.0;
  std::size_t count = 0;
  for_each_subset_of_size(others, k, [&](AgentSet removed) {
    sum += cache.surplus(others - removed);
    ++count;
  });
  return sum / static_cast<double>(count);
}

/// Same average with the summation and division done in exact rationals.
inline Rational averaged_surplus_exact(const BidProfile& profile, std::size_t agent, std::size_t k,
                                       SurplusCache& cache) {
  detail::check_averaging_range(profile, agent, k);
  const AgentSet others = profile.everyone().without(agent);
  Rational sum = 0;
  std::size_t count = 0;
  for_each_subset_of_size(others, k, [&](AgentSet removed) {
    sum += to_rational(cache.surplus(others - removed));
    ++count;
  });
  return sum / Rational(count);
}

}  // namespace redistrib
