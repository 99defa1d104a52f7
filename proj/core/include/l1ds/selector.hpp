#ifndef L1DS_SELECTOR_HPP
#define L1DS_SELECTOR_HPP

#include "l1ds/types.hpp"

#include <vector>

namespace l1ds {

/// Forward-only phase selector state. k_prev is a 1-based index into the
/// target sequence and never decreases across updates.
struct SelectorState {
  int k_prev = 1;
  int history_len = 40;    // H: executed-history window
  int forward_window = 50; // W: how far ahead of k_prev candidates may end
  int target_history = 40; // H': candidate subsequence length minus one
};

/// Starts the selector at the target point nearest to the initial state.
SelectorState init_selector(const std::vector<StateVec>& target, const StateVec& z0, int window_w,
                            int history_h, int target_history);

struct SelectResult {
  int k_new = 1;
  StateVec z_star;
  SelectorState state;
};

/// One selector update: scans candidate end indices k in
/// [k_prev, min(N, k_prev + W)], scores each candidate subsequence
/// {z*_{max(1, k-H')}, ..., z*_k} by unbanded DTW against the executed
/// history (most recent states, oldest first; during warm-up all available
/// samples are used), and returns the smallest k attaining the minimum.
SelectResult select_target(const SelectorState& st, const std::vector<StateVec>& exec_history,
                           const std::vector<StateVec>& target);

} // namespace l1ds

#endif
