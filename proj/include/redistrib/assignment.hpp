#pragma once

// Rectangular maximum-weight assignment (Hungarian method, potentials form).

#include <algorithm>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

namespace redistrib {

/// Assigns every row to a distinct column maximizing the total weight.
/// Requires rows <= cols. `weight(r, c)` returns W. The result holds the
/// column chosen for each row. Runs in O(rows^2 * cols).
template <typename W, typename WeightFn>
std::vector<std::size_t> max_weight_assignment(std::size_t rows, std::size_t cols, WeightFn&& weight) {
  static_assert(std::is_arithmetic_v<W>, "max_weight_assignment needs an arithmetic weight type");
  std::vector<std::size_t> result(rows, 0);
  if (rows == 0) {
    return result;
  }
  const W inf = std::numeric_limits<W>::has_infinity ? std::numeric_limits<W>::infinity()
                                                     : std::numeric_limits<W>::max();
  // 1-based internal indexing; column 0 is the virtual root.
  std::vector<W> u(rows + 1, W{}), v(cols + 1, W{}), minv(cols + 1);
  std::vector<std::size_t> owner(cols + 1, 0), way(cols + 1, 0);
  std::vector<char> used(cols + 1);

  for (std::size_t i = 1; i <= rows; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      W delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) {
          continue;
        }
        const W cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= cols; ++j) {
    if (owner[j] != 0) {
      result[owner[j] - 1] = j - 1;
    }
  }
  return result;
}

}  // namespace redistrib
