#pragma once

// Total preorder over agents induced by a heterogeneous bid profile. Two
// agents are compared by scanning the value levels of all allocations that
// contain exactly one of them, best level first: the first level reached by
// only one of the two decides.

#include "redistrib/bid_profile.hpp"
#include "redistrib/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace redistrib {

enum class Precedence : int { below = -1, equivalent = 0, above = 1 };

struct AgentRanking {
  /// Equivalence classes, best first; agents inside a class in index order.
  std::vector<std::vector<std::size_t>> classes;
  /// relation[i][j] == above means agent i is ranked strictly above agent j.
  std::vector<std::vector<Precedence>> relation;
  /// False when the pairwise relation is not a total preorder.
  bool transitive = true;
  std::optional<std::array<std::size_t, 3>> violation;

  std::size_t class_of(std::size_t agent) const {
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (std::find(classes[c].begin(), classes[c].end(), agent) != classes[c].end()) {
        return c;
      }
    }
    return classes.size();
  }

  /// Agents best first, ties kept in index order.
  std::vector<std::size_t> order() const {
    std::vector<std::size_t> out;
    for (const auto& c : classes) {
      out.insert(out.end(), c.begin(), c.end());
    }
    return out;
  }
};

inline constexpr double kRankingValueTolerance = 1e-9;

namespace detail {

struct RankedAllocation {
  double value;
  std::uint64_t members;
};

inline Precedence compare_agents(const std::vector<RankedAllocation>& sorted, std::size_t i, std::size_t j,
                                 double tolerance) {
  const std::uint64_t bi = std::uint64_t{1} << i;
  const std::uint64_t bj = std::uint64_t{1} << j;
  std::size_t pos = 0;
  while (pos < sorted.size()) {
    // next allocation holding exactly one of i, j
    while (pos < sorted.size() && ((sorted[pos].members & bi) != 0) == ((sorted[pos].members & bj) != 0)) {
      ++pos;
    }
    if (pos == sorted.size()) {
      break;
    }
    const double level = sorted[pos].value;
    bool has_i = false;
    bool has_j = false;
    for (; pos < sorted.size() && sorted[pos].value >= level - tolerance; ++pos) {
      const bool with_i = (sorted[pos].members & bi) != 0;
      const bool with_j = (sorted[pos].members & bj) != 0;
      if (with_i != with_j) {
        has_i = has_i || with_i;
        has_j = has_j || with_j;
      }
    }
    if (has_i != has_j) {
      return has_i ? Precedence::above : Precedence::below;
    }
  }
  return Precedence::equivalent;
}

}  // namespace detail

inline AgentRanking rank_agents(const BidProfile& profile, std::size_t cap = kDefaultEnumerationCap,
                                double tolerance = kRankingValueTolerance) {
  const std::size_t n = profile.agents();
  std::vector<detail::RankedAllocation> sorted;
  for (const auto& alloc : enumerate_allocations(profile, cap)) {
    sorted.push_back({alloc.value, alloc.winners().bits()});
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.value > b.value; });

  AgentRanking out;
  out.relation.assign(n, std::vector<Precedence>(n, Precedence::equivalent));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Precedence rel = detail::compare_agents(sorted, i, j, tolerance);
      out.relation[i][j] = rel;
      out.relation[j][i] = static_cast<Precedence>(-static_cast<int>(rel));
    }
  }

  // weak relation i >= j must be transitive
  auto weakly_above = [&](std::size_t a, std::size_t b) { return out.relation[a][b] != Precedence::below; };
  for (std::size_t a = 0; a < n && out.transitive; ++a) {
    for (std::size_t b = 0; b < n && out.transitive; ++b) {
      for (std::size_t c = 0; c < n && out.transitive; ++c) {
        if (weakly_above(a, b) && weakly_above(b, c) && !weakly_above(a, c)) {
          out.transitive = false;
          out.violation = std::array<std::size_t, 3>{a, b, c};
        }
      }
    }
  }

  // classes by number of agents strictly beaten; exact for a total preorder
  std::vector<std::pair<std::size_t, std::size_t>> score;  // (beaten, agent)
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t beaten = 0;
    for (std::size_t j = 0; j < n; ++j) {
      beaten += out.relation[i][j] == Precedence::above ? 1 : 0;
    }
    score.push_back({beaten, i});
  }
  std::stable_sort(score.begin(), score.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; k < score.size(); ++k) {
    if (k == 0 || score[k].first != score[k - 1].first) {
      out.classes.emplace_back();
    }
    out.classes.back().push_back(score[k].second);
  }
  for (auto& c : out.classes) {
    std::sort(c.begin(), c.end());
  }
  return out;
}

}  // namespace redistrib
