#ifndef L1DS_DTW_HPP
#define L1DS_DTW_HPP

#include "l1ds/types.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace l1ds {

struct DtwParams {
  /// Sakoe-Chiba band half-width w: only cells with |i - j| <= w are
  /// admissible. Absent means unconstrained.
  std::optional<int> band;
};

struct DtwResult {
  double distance = 0.0;
  /// Warping path from (1,1) to (M,N), 1-based, steps in {(1,0),(0,1),(1,1)}.
  std::vector<std::pair<int, int>> path;
  /// Number of DP cells evaluated; O(w * min(M,N)) when banded.
  std::size_t cells_visited = 0;
};

/// Dynamic-programming alignment cost with Euclidean local cost
/// c(i,j) = |a_i - b_j| and recurrence
///   D(i,j) = c(i,j) + min{D(i-1,j), D(i,j-1), D(i-1,j-1)},  D(0,0) = 0.
/// Ties in the min (and in backtracking) prefer the diagonal, then (i-1,j),
/// then (i,j-1). Throws NoWarpPath when the band excludes every path
/// (|M - N| > w), and on empty or dimension-mismatched input.
DtwResult dtw_align(const std::vector<StateVec>& a, const std::vector<StateVec>& b,
                    const DtwParams& params = {});

double dtw_distance(const std::vector<StateVec>& a, const std::vector<StateVec>& b,
                    const DtwParams& params = {});

std::vector<std::pair<int, int>> dtw_path(const std::vector<StateVec>& a,
                                          const std::vector<StateVec>& b,
                                          const DtwParams& params = {});

} // namespace l1ds

#endif
