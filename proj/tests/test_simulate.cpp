#include <doctest.h>

#include <l1ds/config.hpp>
#include <l1ds/demos.hpp>
#include <l1ds/integrate.hpp>
#include <l1ds/simulate.hpp>

#include <cmath>

using namespace l1ds;

namespace {

struct Fixture {
  VectorFieldModel model;
  Trajectory target;  // 501 samples, dt = 2e-3
  StateVec z0;
};

const Fixture& fix() {
  static const Fixture f = [] {
    ShapeParams params;
    params.kind = ShapeKind::sine;
    params.num_demos = 4;
    params.samples_per_demo = 120;
    params.noise = 0.01;
    auto demos = generate_demo_set(params, 5);
    for (Trajectory& d : demos) d = resample_demo(d, 501);
    Fixture out;
    out.model = fit_rbf(demos, 25, 0.2, 1e-6, 5);
    out.z0 = mean_start(demos);
    out.target = rollout(out.model, out.z0, 1.0 / 500, 500).trajectory;
    return out;
  }();
  return f;
}

RunSetup base_setup() {
  RunSetup s;
  s.model = &fix().model;
  s.target = fix().target;
  s.z0 = fix().z0;
  s.n = 501;
  s.clf = ClfConfig::diagonal(2.0, Eigen::Vector2d(1.0, 1.0));
  s.selector.mode = SelectorMode::time_indexed;
  return s;
}

double max_gap(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a.states[i] - b.states[i]).norm());
  return m;
}

} // namespace

TEST_CASE("with everything disabled the run reproduces the rollout bitwise") {
  RunSetup s = base_setup();
  s.clf_enabled = false;
  const RunResult r = run_perfect(s);
  REQUIRE(r.executed.size() == s.target.size());
  for (std::size_t k = 0; k < r.executed.size(); ++k) {
    CHECK(r.executed.states[k][0] == s.target.states[k][0]);
    CHECK(r.executed.states[k][1] == s.target.states[k][1]);
  }
  CHECK(r.dtw_raw == 0.0);
  CHECK_FALSE(r.truncated);
}

TEST_CASE("stabilized error decays at least at the commanded exponential rate") {
  RunSetup s = base_setup();
  s.z0 = fix().z0 + Eigen::Vector2d(0.3, 0.0);
  const RunResult r = run_perfect(s);
  const double v0 = 0.09;
  for (std::size_t k = 0; k < r.executed.size(); ++k) {
    const double v = (r.executed.states[k] - r.zstar_trace[k]).squaredNorm();
    CHECK(v <= v0 * std::exp(-2.0 * r.executed.times[k]) * 1.05);
  }
  CHECK((r.executed.states.back() - r.target.states.back()).norm() < 0.02);
}

TEST_CASE("hold windows pin the state while the run keeps advancing") {
  RunSetup s = base_setup();
  s.hold_windows = {{0.4, 0.5}};
  const RunResult r = run_perfect(s);
  const double dt = s.dt();
  bool saw_hold = false;
  for (std::size_t k = 0; k + 1 < r.executed.size(); ++k) {
    const double t = k * dt;
    if (t >= 0.4 && t < 0.5) {
      saw_hold = true;
      CHECK(r.executed.states[k + 1] == r.executed.states[k]);
    }
  }
  CHECK(saw_hold);
  // Time-indexed target keeps moving under the frozen state.
  CHECK(r.selector_indices[220] == 221);
  CHECK(r.selector_indices[240] == 241);
  // After release the stabilizer pulls the state back toward the target.
  const double gap_release = (r.executed.states[251] - r.zstar_trace[251]).norm();
  const double gap_end = (r.executed.states.back() - r.zstar_trace.back()).norm();
  CHECK(gap_release > 0.01);
  CHECK(gap_end < gap_release * 0.65); // at least the commanded decay over the remaining 0.5

}

TEST_CASE("leaving the truncation box freezes the run and flags it") {
  RunSetup s = base_setup();
  s.clf_enabled = false;
  DomainBox tight;
  tight.lower = s.z0 - Eigen::Vector2d::Constant(1e-6);
  tight.upper = s.z0 + Eigen::Vector2d::Constant(1e-6);
  s.bounds = tight;
  const RunResult r = run_perfect(s);
  CHECK(r.truncated);
  for (std::size_t k = 0; k < r.executed.size(); ++k)
    CHECK(r.executed.states[k] == s.z0);
  CHECK(r.dtw_raw > 0.0);
}

TEST_CASE("disturbance-free plant tracking stays close to the ideal regime") {
  RunSetup s = base_setup();
  s.z0 = fix().z0 + Eigen::Vector2d(0.1, -0.1);
  // stiff inner loop; it runs at 10x the outer rate so these gains are stable
  s.pid = PidGains{2500.0, 100.0, 100.0};
  const RunResult ideal = run_perfect(s);
  const RunResult plant = run_imperfect(s);
  REQUIRE(plant.executed.size() == ideal.executed.size());
  CHECK(max_gap(plant.executed, ideal.executed) < 0.05);
  CHECK_FALSE(plant.truncated);
  // The reference the plant chased is the task-stack output, not the plant state.
  CHECK(plant.reference.size() == plant.executed.size());
  CHECK(max_gap(plant.reference, ideal.executed) < 0.05);
}

TEST_CASE("stiffer position loops attenuate a matched ripple monotonically") {
  RunSetup s = base_setup();
  s.clf_enabled = false;
  DisturbanceSpec ripple;
  ripple.kind = DisturbanceKind::multi_sine;
  ripple.channel = Channel::matched;
  ripple.sines = {{{3.0, 3.0, 0.0}}, {{2.0, 5.0, 0.5}}};
  s.disturbances = {ripple};
  double prev = -1.0;
  for (double kp : {100.0, 400.0, 1600.0}) {
    s.pid.kp = kp;
    const RunResult r = run_imperfect(s);
    if (prev >= 0.0) CHECK(r.dtw_raw < prev);
    prev = r.dtw_raw;
  }
}

TEST_CASE("identical setups give bitwise identical runs") {
  ShapeParams params;
  params.kind = ShapeKind::sine;
  params.num_demos = 4;
  params.samples_per_demo = 120;
  params.noise = 0.01;
  auto demos = generate_demo_set(params, 5);
  for (Trajectory& d : demos) d = resample_demo(d, 1001);
  const VectorFieldModel model = fit_rbf(demos, 25, 0.2, 1e-6, 5);

  RunSetup s;
  s.model = &model;
  s.z0 = mean_start(demos) + Eigen::Vector2d(0.2, 0.1);
  s.n = 1001;
  s.clf = ClfConfig::diagonal(2.0, Eigen::Vector2d(1.0, 1.0));
  s.target = rollout(model, mean_start(demos), 1e-3, 1000).trajectory;
  L1Config l1;
  l1.omega = 30.0;
  l1.t_sample = 1e-3;
  l1.a_s_diag = Eigen::Vector2d(-10.0, -10.0);
  s.l1 = l1;
  DisturbanceSpec sig;
  sig.kind = DisturbanceKind::multi_sine;
  sig.channel = Channel::task;
  sig.sines = {{{0.5, 2.0, 0.0}}, {{0.3, 3.0, 1.0}}};
  s.disturbances = {sig};

  const RunResult a = run_perfect(s);
  const RunResult b = run_perfect(s);
  REQUIRE(a.executed.size() == b.executed.size());
  for (std::size_t k = 0; k < a.executed.size(); ++k)
    CHECK(a.executed.states[k] == b.executed.states[k]);
  CHECK(a.dtw_raw == b.dtw_raw);
  CHECK(a.selector_indices == b.selector_indices);
}

TEST_CASE("score normalization divides by the uncontrolled deviation") {
  RunSetup s = base_setup();
  DisturbanceSpec sig;
  sig.kind = DisturbanceKind::multi_sine;
  sig.channel = Channel::task;
  sig.sines = {{{0.8, 2.0, 0.0}}, {{0.5, 3.0, 1.0}}};
  s.disturbances = {sig};

  RunSetup nom = s;
  nom.clf_enabled = false;
  const RunResult baseline = run_perfect(nom);
  const RunResult variant = run_perfect(s);
  REQUIRE(baseline.dtw_raw > 0.0);
  const double ratio = normalized_dtw(variant, baseline);
  CHECK(ratio == doctest::Approx(variant.dtw_raw / baseline.dtw_raw).epsilon(1e-12));
  CHECK(ratio < 1.0); // the stabilizer beats doing nothing here
}

TEST_CASE("a deviation-free baseline is rejected as degenerate") {
  RunSetup s = base_setup();
  s.clf_enabled = false;
  const RunResult baseline = run_perfect(s); // reproduces the target exactly
  const RunResult variant = run_perfect(base_setup());
  CHECK_THROWS_AS(normalized_dtw(variant, baseline), DegenerateBaseline);
}

TEST_CASE("runs over different targets cannot be compared") {
  const RunResult a = run_perfect(base_setup());
  RunSetup other = base_setup();
  other.target.states.pop_back();
  other.target.times.pop_back();
  other.n = 500;
  const RunResult b = run_perfect(other);
  CHECK_THROWS_AS(normalized_dtw(a, b), ConfigError);
}

TEST_CASE("setup validation routes disturbances to the right regime") {
  RunSetup s = base_setup();
  DisturbanceSpec matched;
  matched.kind = DisturbanceKind::constant;
  matched.channel = Channel::matched;
  matched.amplitude = Eigen::Vector2d(1.0, 0.0);
  s.disturbances = {matched};
  CHECK_THROWS_AS(run_perfect(s), ConfigError);

  RunSetup t = base_setup();
  DisturbanceSpec task;
  task.kind = DisturbanceKind::constant;
  task.channel = Channel::task;
  task.amplitude = Eigen::Vector2d(1.0, 0.0);
  t.disturbances = {task};
  CHECK_THROWS_AS(run_imperfect(t), ConfigError);

  RunSetup bad = base_setup();
  bad.z0 = Eigen::Vector3d::Zero();
  CHECK_THROWS_AS(run_perfect(bad), DimensionMismatch);

  RunSetup hold = base_setup();
  hold.hold_windows = {{0.5, 0.5}};
  CHECK_THROWS_AS(run_perfect(hold), ConfigError);

  RunSetup empty = base_setup();
  empty.target = Trajectory{};
  CHECK_THROWS_AS(run_perfect(empty), ConfigError);
}
