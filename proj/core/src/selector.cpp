#include "l1ds/selector.hpp"

#include <algorithm>
#include <limits>

namespace l1ds {

SelectorState init_selector(const std::vector<StateVec>& target, const StateVec& z0, int window_w,
                            int history_h, int target_history) {
  if (target.empty()) throw Error("selector: empty target sequence");
  if (window_w < 1) throw ConfigError("selector.window_w must be at least 1");
  if (history_h < 1) throw ConfigError("selector.history_h must be at least 1");
  if (target_history < 1) throw ConfigError("selector.target_history must be at least 1");
  SelectorState st;
  st.history_len = history_h;
  st.forward_window = window_w;
  st.target_history = target_history;
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = (target[i] - z0).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  st.k_prev = best + 1;
  return st;
}

SelectResult select_target(const SelectorState& st, const std::vector<StateVec>& exec_history,
                           const std::vector<StateVec>& target) {
  const int n = static_cast<int>(target.size());
  if (n == 0) throw Error("select_target: empty target sequence");
  if (exec_history.empty()) throw Error("select_target: empty execution history");
  if (st.k_prev < 1 || st.k_prev > n) throw Error("select_target: k_prev out of range");

  const int k_lo = st.k_prev;
  const int k_hi = std::min(n, st.k_prev + st.forward_window);
  const int hp = st.target_history;
  const int rows = static_cast<int>(exec_history.size());

  // All candidates draw their points from one contiguous strip of the target;
  // precompute the local costs once and run a fresh small DP per candidate.
  const int strip_lo = std::max(1, k_lo - hp); // 1-based
  const int strip_len = k_hi - strip_lo + 1;
  std::vector<double> cost(static_cast<std::size_t>(rows) * strip_len);
  for (int r = 0; r < rows; ++r)
    for (int j = 0; j < strip_len; ++j)
      cost[static_cast<std::size_t>(r) * strip_len + j] =
          (exec_history[r] - target[strip_lo - 1 + j]).norm();

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(static_cast<std::size_t>(hp) + 2), cur(static_cast<std::size_t>(hp) + 2);

  int best_k = k_lo;
  double best_cost = kInf;
  for (int k = k_lo; k <= k_hi; ++k) {
    const int c_lo = std::max(1, k - hp);
    const int cols = k - c_lo + 1;
    const int off = c_lo - strip_lo;

    std::fill(prev.begin(), prev.begin() + cols + 1, kInf);
    prev[0] = 0.0;
    for (int r = 1; r <= rows; ++r) {
      cur[0] = kInf;
      const double* crow = &cost[static_cast<std::size_t>(r - 1) * strip_len + off];
      for (int j = 1; j <= cols; ++j)
        cur[j] = crow[j - 1] + std::min({prev[j - 1], prev[j], cur[j - 1]});
      std::swap(prev, cur);
    }
    const double c = prev[cols];
    if (c < best_cost) {
      best_cost = c;
      best_k = k;
    }
  }

  SelectResult res;
  res.k_new = best_k;
  res.z_star = target[best_k - 1];
  res.state = st;
  res.state.k_prev = best_k;
  return res;
}

} // namespace l1ds
