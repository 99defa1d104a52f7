#include <benchmark/benchmark.h>

#include <l1ds/clf.hpp>
#include <l1ds/demos.hpp>
#include <l1ds/dtw.hpp>
#include <l1ds/integrate.hpp>
#include <l1ds/l1.hpp>
#include <l1ds/rbf_field.hpp>
#include <l1ds/selector.hpp>

#include <cmath>
#include <vector>

using namespace l1ds;

namespace {

const VectorFieldModel& model() {
  static const VectorFieldModel m = [] {
    ShapeParams params;
    params.kind = ShapeKind::sine;
    params.num_demos = 5;
    params.samples_per_demo = 120;
    params.noise = 0.01;
    auto demos = generate_demo_set(params, 0);
    for (Trajectory& d : demos) d = resample_demo(d, 1001);
    return fit_rbf(demos, 30, 0.2, 1e-6, 0);
  }();
  return m;
}

std::vector<StateVec> wavy_sequence(int n, double phase) {
  std::vector<StateVec> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    out.push_back(Eigen::Vector2d(t, std::sin(6.28 * t + phase)));
  }
  return out;
}

} // namespace

static void BM_eval_field(benchmark::State& state) {
  const VectorFieldModel& m = model();
  const StateVec z = m.domain.center();
  for (auto _ : state) benchmark::DoNotOptimize(eval_field(m, z));
}
BENCHMARK(BM_eval_field);

static void BM_clf_qp(benchmark::State& state) {
  const ClfConfig cfg = ClfConfig::diagonal(2.0, Eigen::Vector2d(1.0, 1.0));
  const StateVec f_z = Eigen::Vector2d(1.0, -0.5);
  const StateVec f_zs = Eigen::Vector2d(0.8, -0.3);
  const StateVec e = Eigen::Vector2d(0.2, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(clf_qp(cfg, f_z, f_zs, e));
}
BENCHMARK(BM_clf_qp);

static void BM_l1_step(benchmark::State& state) {
  L1Config cfg;
  cfg.omega = 30.0;
  cfg.t_sample = 1e-3;
  cfg.a_s_diag = Eigen::Vector2d(-10.0, -10.0);
  const StateVec z = Eigen::Vector2d(0.1, 0.2);
  const StateVec f_z = Eigen::Vector2d(1.0, -0.5);
  const StateVec u_nom = Eigen::Vector2d(0.05, 0.0);
  L1State st = init_l1_state(z);
  for (auto _ : state) {
    auto [next, u_a] = l1_step(cfg, st, z, f_z, u_nom, 1e-3);
    st = std::move(next);
    benchmark::DoNotOptimize(u_a);
  }
}
BENCHMARK(BM_l1_step);

static void BM_dtw_unbanded(benchmark::State& state) {
  const auto a = wavy_sequence(static_cast<int>(state.range(0)), 0.0);
  const auto b = wavy_sequence(static_cast<int>(state.range(0)), 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(dtw_distance(a, b));
}
BENCHMARK(BM_dtw_unbanded)->Arg(100)->Arg(400);

static void BM_dtw_banded(benchmark::State& state) {
  const auto a = wavy_sequence(static_cast<int>(state.range(0)), 0.0);
  const auto b = wavy_sequence(static_cast<int>(state.range(0)), 0.4);
  const DtwParams band{10};
  for (auto _ : state) benchmark::DoNotOptimize(dtw_distance(a, b, band));
}
BENCHMARK(BM_dtw_banded)->Arg(100)->Arg(400);

static void BM_select_target(benchmark::State& state) {
  const auto target = wavy_sequence(1001, 0.0);
  const auto history = std::vector<StateVec>(target.begin() + 100, target.begin() + 141);
  SelectorState st = init_selector(target, target[100], 50, 40, 40);
  st.k_prev = 101;
  for (auto _ : state) benchmark::DoNotOptimize(select_target(st, history, target));
}
BENCHMARK(BM_select_target);

static void BM_rollout(benchmark::State& state) {
  const VectorFieldModel& m = model();
  const StateVec z0 = m.domain.center();
  for (auto _ : state) benchmark::DoNotOptimize(rollout(m, z0, 1e-3, 1000));
}
BENCHMARK(BM_rollout);

BENCHMARK_MAIN();
