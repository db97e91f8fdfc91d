#pragma once

// Optimal (allocatively efficient) assignment of objects to unit-demand agents.

#include "redistrib/agent_set.hpp"
#include "redistrib/assignment.hpp"
#include "redistrib/bid_profile.hpp"
#include "redistrib/error.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace redistrib {

/// Which optimum to report when several allocations reach the maximum value.
enum class TieBreak {
  lexicographic,  ///< smallest sorted (agent, object) pair list
  reversed,       ///< smallest list after reversing agent and object indices
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;
inline constexpr std::size_t kMaxTieBreakTableSize = std::size_t{1} << 24;

/// Some maximum-value allocation among `present` agents. Which optimum is
/// returned among ties is unspecified but deterministic.
inline Allocation any_optimal_allocation(const BidProfile& profile, AgentSet present) {
  const auto agents = present.members();
  const std::size_t m = agents.size();
  const std::size_t p = profile.objects();
  std::vector<Assignment> pairs;
  if (m == 0) {
    return {};
  }
  if (p <= m) {
    const auto cols = max_weight_assignment<double>(
        p, m, [&](std::size_t obj, std::size_t a) { return profile(agents[a], obj); });
    for (std::size_t obj = 0; obj < p; ++obj) {
      pairs.push_back({agents[cols[obj]], obj});
    }
  } else {
    const auto cols = max_weight_assignment<double>(
        m, p, [&](std::size_t a, std::size_t obj) { return profile(agents[a], obj); });
    for (std::size_t a = 0; a < m; ++a) {
      pairs.push_back({agents[a], cols[a]});
    }
  }
  return make_allocation(profile, std::move(pairs));
}

inline double optimal_value(const BidProfile& profile, AgentSet present) {
  return any_optimal_allocation(profile, present).value;
}

namespace detail {

// Dynamic program over (agent position, used-object mask). Among full
// allocations of maximum value it reconstructs the lexicographically
// smallest sorted pair list: an agent is assigned whenever some optimum
// assigns it, with the smallest such object.
inline Allocation lexicographic_optimum(const BidProfile& profile, AgentSet present) {
  const auto agents = present.members();
  const std::size_t m = agents.size();
  const std::size_t p = profile.objects();
  if (m == 0) {
    return {};
  }
  const std::size_t masks = std::size_t{1} << std::min<std::size_t>(p, 63);
  require(p < 63 && (m + 1) * masks <= kMaxTieBreakTableSize, ErrorKind::cap_exceeded,
          "instance too large for exact tie-broken allocation (" + std::to_string(m) + " agents, " +
              std::to_string(p) + " objects)");
  const std::size_t need = std::min(m, p);
  constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

  std::vector<double> best((m + 1) * masks, kInfeasible);
  auto at = [&](std::size_t pos, std::size_t mask) -> double& { return best[pos * masks + mask]; };
  for (std::size_t mask = 0; mask < masks; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) == need) {
      at(m, mask) = 0.0;
    }
  }
  for (std::size_t pos = m; pos-- > 0;) {
    for (std::size_t mask = 0; mask < masks; ++mask) {
      double value = at(pos + 1, mask);
      for (std::size_t obj = 0; obj < p; ++obj) {
        if ((mask >> obj) & 1U) {
          continue;
        }
        const double next = at(pos + 1, mask | (std::size_t{1} << obj));
        if (next != kInfeasible) {
          value = std::max(value, profile(agents[pos], obj) + next);
        }
      }
      at(pos, mask) = value;
    }
  }

  std::vector<Assignment> pairs;
  std::size_t mask = 0;
  for (std::size_t pos = 0; pos < m; ++pos) {
    const double target = at(pos, mask);
    bool assigned = false;
    for (std::size_t obj = 0; obj < p && !assigned; ++obj) {
      if ((mask >> obj) & 1U) {
        continue;
      }
      const double next = at(pos + 1, mask | (std::size_t{1} << obj));
      if (next != kInfeasible && profile(agents[pos], obj) + next == target) {
        pairs.push_back({agents[pos], obj});
        mask |= std::size_t{1} << obj;
        assigned = true;
      }
    }
  }
  return make_allocation(profile, std::move(pairs));
}

inline BidProfile reverse_indices(const BidProfile& profile) {
  const std::size_t n = profile.agents();
  const std::size_t p = profile.objects();
  std::vector<double> flat(n * p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      flat[(n - 1 - i) * p + (p - 1 - j)] = profile(i, j);
    }
  }
  return BidProfile(n, p, std::move(flat));
}

}  // namespace detail

/// Maximum-value allocation of the objects to the non-excluded agents, with a
/// deterministic tie-break. All min(|present|, p) slots are filled.
inline Allocation optimal_allocation(const BidProfile& profile, AgentSet excluded = {},
                                     TieBreak tie_break = TieBreak::lexicographic) {
  const AgentSet present = profile.everyone() - excluded;
  if (tie_break == TieBreak::lexicographic) {
    return detail::lexicographic_optimum(profile, present);
  }
  const std::size_t n = profile.agents();
  const std::size_t p = profile.objects();
  AgentSet mirrored;
  for (std::size_t i : present.members()) {
    mirrored = mirrored.with(n - 1 - i);
  }
  const auto flipped = detail::lexicographic_optimum(detail::reverse_indices(profile), mirrored);
  std::vector<Assignment> pairs;
  for (const auto& a : flipped.pairs) {
    pairs.push_back({n - 1 - a.agent, p - 1 - a.object});
  }
  return make_allocation(profile, std::move(pairs));
}

/// Number of full injective assignments, saturating at `limit + 1`.
inline std::size_t allocation_count(std::size_t n, std::size_t p, std::size_t limit) {
  const std::size_t big = std::max(n, p);
  const std::size_t small = std::min(n, p);
  std::size_t count = 1;
  for (std::size_t k = 0; k < small; ++k) {
    const std::size_t factor = big - k;
    if (count > (limit + 1) / factor) {
      return limit + 1;
    }
    count *= factor;
  }
  return count;
}

/// All full injective assignments (every object placed when n >= p, every
/// agent served when n < p), each with its value.
inline std::vector<Allocation> enumerate_allocations(const BidProfile& profile,
                                                     std::size_t cap = kDefaultEnumerationCap) {
  const std::size_t n = profile.agents();
  const std::size_t p = profile.objects();
  const std::size_t count = allocation_count(n, p, cap);
  require(count <= cap, ErrorKind::cap_exceeded,
          "enumeration of " + std::to_string(n) + " agents x " + std::to_string(p) +
              " objects exceeds the cap of " + std::to_string(cap) + " allocations");

  std::vector<Allocation> out;
  out.reserve(count);
  const bool objects_pick = n >= p;  // each object picks a distinct agent
  const std::size_t slots = objects_pick ? p : n;
  const std::size_t choices = objects_pick ? n : p;
  std::vector<std::size_t> chosen(slots);
  std::vector<char> taken(choices, 0);

  auto emit = [&] {
    std::vector<Assignment> pairs(slots);
    for (std::size_t s = 0; s < slots; ++s) {
      pairs[s] = objects_pick ? Assignment{chosen[s], s} : Assignment{s, chosen[s]};
    }
    out.push_back(make_allocation(profile, std::move(pairs)));
  };
  auto recurse = [&](auto&& self, std::size_t slot) -> void {
    if (slot == slots) {
      emit();
      return;
    }
    for (std::size_t c = 0; c < choices; ++c) {
      if (taken[c]) {
        continue;
      }
      taken[c] = 1;
      chosen[slot] = c;
      self(self, slot + 1);
      taken[c] = 0;
    }
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace redistrib
