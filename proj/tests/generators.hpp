#pragma once

// Random inputs for the property tests.

#include "redistrib/bid_profile.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace gen {

using redistrib::BidProfile;

/// Entries drawn from {0, ..., top}; small `top` produces many ties.
inline BidProfile integer_profile(std::mt19937_64& rng, std::size_t n, std::size_t p, int top) {
  std::uniform_int_distribution<int> d(0, top);
  std::vector<double> bids(n * p);
  for (auto& x : bids) x = d(rng);
  return BidProfile(n, p, std::move(bids));
}

/// Entries on a 1/1024 grid in [0, 100): distinct almost surely, sums exact.
inline BidProfile grid_profile(std::mt19937_64& rng, std::size_t n, std::size_t p) {
  std::uniform_int_distribution<int> d(0, 100 * 1024 - 1);
  std::vector<double> bids(n * p);
  for (auto& x : bids) x = d(rng) / 1024.0;
  return BidProfile(n, p, std::move(bids));
}

/// Constant rows with integer values in {0, ..., top}.
inline BidProfile homogeneous_profile(std::mt19937_64& rng, std::size_t n, std::size_t p, int top) {
  std::uniform_int_distribution<int> d(0, top);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return BidProfile::homogeneous(v, p);
}

/// Mixes the three shapes above.
inline BidProfile any_profile(std::mt19937_64& rng, std::size_t n, std::size_t p) {
  switch (rng() % 4) {
    case 0: return integer_profile(rng, n, p, 3);
    case 1: return integer_profile(rng, n, p, 20);
    case 2: return homogeneous_profile(rng, n, p, 5);
    default: return grid_profile(rng, n, p);
  }
}

inline std::size_t between(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace gen
