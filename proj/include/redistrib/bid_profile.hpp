#pragma once

#include "redistrib/agent_set.hpp"
#include "redistrib/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace redistrib {

/// n agents by p objects matrix of nonnegative finite bids; row i is agent i.
class BidProfile {
 public:
  BidProfile() = default;

  BidProfile(std::size_t n, std::size_t p, std::vector<double> bids) : n_(n), p_(p), bids_(std::move(bids)) {
    require(n_ >= 1, ErrorKind::invalid_argument, "profile needs at least one agent");
    require(p_ >= 1, ErrorKind::invalid_argument, "profile needs at least one object");
    require(n_ <= AgentSet::kMaxAgents, ErrorKind::invalid_argument, "profile supports at most 64 agents");
    require(bids_.size() == n_ * p_, ErrorKind::invalid_argument,
            "bid matrix has " + std::to_string(bids_.size()) + " entries, expected n*p = " + std::to_string(n_ * p_));
    for (double b : bids_) {
      require(std::isfinite(b) && b >= 0.0, ErrorKind::invalid_argument, "bids must be finite and nonnegative");
    }
  }

  static BidProfile from_rows(const std::vector<std::vector<double>>& rows) {
    require(!rows.empty(), ErrorKind::invalid_argument, "profile needs at least one agent");
    const std::size_t p = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * p);
    for (const auto& row : rows) {
      require(row.size() == p, ErrorKind::invalid_argument, "ragged bid matrix");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return BidProfile(rows.size(), p, std::move(flat));
  }

  /// Every agent values every object at its single scalar value.
  static BidProfile homogeneous(std::span<const double> values, std::size_t p) {
    std::vector<double> flat;
    flat.reserve(values.size() * p);
    for (double v : values) {
      flat.insert(flat.end(), p, v);
    }
    return BidProfile(values.size(), p, std::move(flat));
  }

  /// b_ij = gamma_j * v_i.
  static BidProfile scaled(std::span<const double> values, std::span<const double> gamma) {
    std::vector<double> flat;
    flat.reserve(values.size() * gamma.size());
    for (double v : values) {
      for (double g : gamma) {
        flat.push_back(g * v);
      }
    }
    return BidProfile(values.size(), gamma.size(), std::move(flat));
  }

  std::size_t agents() const { return n_; }
  std::size_t objects() const { return p_; }
  AgentSet everyone() const { return AgentSet::all(n_); }

  double operator()(std::size_t agent, std::size_t object) const { return bids_[agent * p_ + object]; }
  std::span<const double> row(std::size_t agent) const { return {bids_.data() + agent * p_, p_}; }
  const std::vector<double>& data() const { return bids_; }

  /// True when every row is constant (identical objects).
  bool is_homogeneous() const {
    for (std::size_t i = 0; i < n_; ++i) {
      const auto r = row(i);
      if (std::any_of(r.begin(), r.end(), [&](double b) { return b != r.front(); })) {
        return false;
      }
    }
    return true;
  }

  BidProfile with_bid(std::size_t agent, std::size_t object, double value) const {
    auto copy = bids_;
    copy[agent * p_ + object] = value;
    return BidProfile(n_, p_, std::move(copy));
  }

  bool operator==(const BidProfile&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<double> bids_;
};

struct Assignment {
  std::size_t agent = 0;
  std::size_t object = 0;

  auto operator<=>(const Assignment&) const = default;
};

/// Injective agent/object assignment; pairs kept sorted by agent.
struct Allocation {
  std::vector<Assignment> pairs;
  double value = 0.0;

  bool operator==(const Allocation&) const = default;

  /// Object held by `agent`, or -1 when the agent receives nothing.
  long object_of(std::size_t agent) const {
    for (const auto& a : pairs) {
      if (a.agent == agent) {
        return static_cast<long>(a.object);
      }
    }
    return -1;
  }

  AgentSet winners() const {
    AgentSet s;
    for (const auto& a : pairs) {
      s = s.with(a.agent);
    }
    return s;
  }
};

/// Canonical value of a set of pairs: summed in ascending agent order.
inline double allocation_value(const BidProfile& profile, std::span<const Assignment> pairs) {
  double total = 0.0;
  for (const auto& a : pairs) {
    total += profile(a.agent, a.object);
  }
  return total;
}

inline Allocation make_allocation(const BidProfile& profile, std::vector<Assignment> pairs) {
  std::sort(pairs.begin(), pairs.end());
  Allocation out;
  out.value = allocation_value(profile, pairs);
  out.pairs = std::move(pairs);
  return out;
}

}  // namespace redistrib
