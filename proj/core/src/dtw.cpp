#include "l1ds/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace l1ds {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DtwResult dtw_align(const std::vector<StateVec>& a, const std::vector<StateVec>& b,
                    const DtwParams& params) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  if (m == 0 || n == 0) throw NoWarpPath("dtw: empty sequence");
  if (a.front().size() != b.front().size())
    throw DimensionMismatch("dtw: sequences have different state dimensions");
  int w = std::max(m, n);
  if (params.band) {
    if (*params.band < 0) throw ConfigError("dtw: band must be nonnegative");
    w = *params.band;
    if (std::abs(m - n) > w)
      throw NoWarpPath("dtw: band " + std::to_string(w) + " admits no warping path for lengths " +
                       std::to_string(m) + " and " + std::to_string(n));
  }

  // (m+1) x (n+1) table with an infinite border row/column; D[0][0] = 0.
  std::vector<double> table(static_cast<std::size_t>(m + 1) * (n + 1), kInf);
  auto D = [&](int i, int j) -> double& {
    return table[static_cast<std::size_t>(i) * (n + 1) + j];
  };
  D(0, 0) = 0.0;

  DtwResult res;
  auto cost = [&](int i, int j) { return (a[i - 1] - b[j - 1]).norm(); };

  for (int i = 1; i <= m; ++i) {
    const int jlo = std::max(1, i - w);
    const int jhi = std::min(n, i + w);
    for (int j = jlo; j <= jhi; ++j) {
      const double best = std::min({D(i - 1, j - 1), D(i - 1, j), D(i, j - 1)});
      if (best < kInf) D(i, j) = cost(i, j) + best;
      ++res.cells_visited;
    }
  }

  res.distance = D(m, n);
  if (!(res.distance < kInf)) throw NoWarpPath("dtw: no admissible warping path");

  int i = m, j = n;
  res.path.emplace_back(i, j);
  while (i > 1 || j > 1) {
    const double rest = D(i, j) - cost(i, j);
    // The stored value equals cost plus one of the three predecessors, so an
    // exact comparison identifies them; preference order breaks ties.
    if (i > 1 && j > 1 && D(i - 1, j - 1) == rest) {
      --i;
      --j;
    } else if (i > 1 && D(i - 1, j) == rest) {
      --i;
    } else if (j > 1 && D(i, j - 1) == rest) {
      --j;
    } else {
      // Guard against pathological floating-point behavior: fall back to the
      // best reachable predecessor.
      double dd = (i > 1 && j > 1) ? D(i - 1, j - 1) : kInf;
      double du = i > 1 ? D(i - 1, j) : kInf;
      double dl = j > 1 ? D(i, j - 1) : kInf;
      if (dd <= du && dd <= dl) {
        --i;
        --j;
      } else if (du <= dl) {
        --i;
      } else {
        --j;
      }
    }
    res.path.emplace_back(i, j);
  }
  std::reverse(res.path.begin(), res.path.end());
  return res;
}

double dtw_distance(const std::vector<StateVec>& a, const std::vector<StateVec>& b,
                    const DtwParams& params) {
  return dtw_align(a, b, params).distance;
}

std::vector<std::pair<int, int>> dtw_path(const std::vector<StateVec>& a,
                                          const std::vector<StateVec>& b,
                                          const DtwParams& params) {
  return dtw_align(a, b, params).path;
}

} // namespace l1ds
