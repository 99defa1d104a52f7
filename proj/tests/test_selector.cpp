#include <l1ds/selector.hpp>

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace l1ds;

namespace {

// straight target with unit spacing so index arithmetic is obvious
std::vector<StateVec> line_target(int n) {
  std::vector<StateVec> out;
  for (int i = 0; i < n; ++i) {
    StateVec z(2);
    z << static_cast<double>(i), 0.0;
    out.push_back(z);
  }
  return out;
}

std::vector<StateVec> slice(const std::vector<StateVec>& v, int first, int last) {
  return {v.begin() + first, v.begin() + last + 1};
}

} // namespace

TEST_CASE("selector starts at the nearest target point") {
  const auto target = line_target(50);
  StateVec z0(2);
  z0 << 7.3, 0.4;
  const SelectorState st = init_selector(target, z0, 10, 5, 5);
  CHECK(st.k_prev == 8); // 1-based index of the point at x = 7
  CHECK(st.forward_window == 10);
  CHECK(st.history_len == 5);
  CHECK(st.target_history == 5);

  StateVec z_far(2);
  z_far << 100.0, 0.0;
  CHECK(init_selector(target, z_far, 10, 5, 5).k_prev == 50);
}

TEST_CASE("perfectly tracked history advances the index to the matching phase") {
  const auto target = line_target(60);
  SelectorState st = init_selector(target, target[0], 15, 6, 6);
  // robot has executed exactly the target prefix up to index 9 (0-based)
  const auto hist = slice(target, 3, 9);
  const SelectResult r = select_target(st, hist, target);
  CHECK(r.k_new == 10); // 1-based end of the matching window
  CHECK((r.z_star - target[9]).norm() == 0.0);
  CHECK(r.state.k_prev == 10);
}

TEST_CASE("selection never moves backwards and respects the forward window") {
  const auto target = line_target(40);
  SelectorState st = init_selector(target, target[20], 5, 4, 4);
  CHECK(st.k_prev == 21);
  // history pinned at the start of the curve: phase says go back, selector holds
  const auto early_hist = slice(target, 0, 3);
  const SelectResult r = select_target(st, early_hist, target);
  CHECK(r.k_new >= 21);
  CHECK(r.k_new <= 21 + 5);
}

TEST_CASE("a frozen robot stalls the selector") {
  const auto target = line_target(80);
  SelectorState st = init_selector(target, target[10], 8, 5, 5);
  std::vector<StateVec> hist(6, target[10]); // robot glued to one point
  int k = st.k_prev;
  for (int rounds = 0; rounds < 10; ++rounds) {
    const SelectResult r = select_target(st, hist, target);
    CHECK(r.k_new >= k);
    k = r.k_new;
    st = r.state;
  }
  // the stationary history keeps matching the same local window
  CHECK(k <= 16);
}

TEST_CASE("index is clamped at the end of the target") {
  const auto target = line_target(20);
  SelectorState st = init_selector(target, target[19], 10, 4, 4);
  CHECK(st.k_prev == 20);
  const auto hist = slice(target, 16, 19);
  const SelectResult r = select_target(st, hist, target);
  CHECK(r.k_new == 20);
  CHECK((r.z_star - target[19]).norm() == 0.0);
}

TEST_CASE("warm-up works with a single-sample history") {
  const auto target = line_target(30);
  SelectorState st = init_selector(target, target[0], 10, 6, 6);
  const std::vector<StateVec> hist{target[2]};
  const SelectResult r = select_target(st, hist, target);
  CHECK(r.k_new >= 1);
  CHECK(r.k_new <= 11);
  CHECK((r.z_star - target[r.k_new - 1]).norm() == 0.0);
}

TEST_CASE("selector input validation") {
  const auto target = line_target(10);
  CHECK_THROWS_AS(init_selector({}, StateVec::Zero(2), 5, 3, 3), Error);
  SelectorState st = init_selector(target, target[0], 5, 3, 3);
  CHECK_THROWS_AS(select_target(st, {}, target), Error);
}
