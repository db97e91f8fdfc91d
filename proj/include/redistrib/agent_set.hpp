#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace redistrib {

/// Set of agent indices (0-based) encoded as a bitmask; supports up to 64 agents.
class AgentSet {
 public:
  static constexpr std::size_t kMaxAgents = 64;

  constexpr AgentSet() = default;
  constexpr explicit AgentSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr AgentSet all(std::size_t n) {
    return AgentSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static constexpr AgentSet single(std::size_t i) { return AgentSet(std::uint64_t{1} << i); }

  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr AgentSet with(std::size_t i) const { return AgentSet(bits_ | (std::uint64_t{1} << i)); }
  constexpr AgentSet without(std::size_t i) const { return AgentSet(bits_ & ~(std::uint64_t{1} << i)); }
  constexpr AgentSet operator-(AgentSet other) const { return AgentSet(bits_ & ~other.bits_); }
  constexpr AgentSet operator|(AgentSet other) const { return AgentSet(bits_ | other.bits_); }
  constexpr AgentSet operator&(AgentSet other) const { return AgentSet(bits_ & other.bits_); }
  constexpr bool is_subset_of(AgentSet other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr bool operator==(const AgentSet&) const = default;

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    }
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Calls f(AgentSet) for every k-element subset of `pool`, in lexicographic order of the chosen members.
template <typename F>
void for_each_subset_of_size(AgentSet pool, std::size_t k, F&& f) {
  const auto members = pool.members();
  const std::size_t m = members.size();
  if (k > m) {
    return;
  }
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) {
    idx[i] = i;
  }
  while (true) {
    std::uint64_t bits = 0;
    for (std::size_t i : idx) {
      bits |= std::uint64_t{1} << members[i];
    }
    f(AgentSet(bits));
    // advance to next combination
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == m - k + pos - 1) {
      --pos;
    }
    if (pos == 0) {
      return;
    }
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) {
      idx[i] = idx[i - 1] + 1;
    }
  }
}

}  // namespace redistrib
