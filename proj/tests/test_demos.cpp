#include <l1ds/demos.hpp>

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

using namespace l1ds;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

Trajectory zigzag_demo() {
  Trajectory t;
  t.times = {0.0, 0.4, 1.0, 1.5, 2.5};
  for (double x : {0.0, 1.0, 1.5, 3.0, 4.0}) {
    StateVec z(2);
    z << x, -0.5 * x;
    t.states.push_back(z);
  }
  return t;
}

} // namespace

TEST_CASE("trajectory validation catches broken invariants") {
  Trajectory t = zigzag_demo();
  CHECK_NOTHROW(t.validate());

  Trajectory unsorted = t;
  unsorted.times[2] = unsorted.times[1];
  CHECK_THROWS_AS(unsorted.validate(), InvalidDemonstration);

  Trajectory mixed = t;
  mixed.states[3] = StateVec::Zero(3);
  CHECK_THROWS_AS(mixed.validate(), Error);

  Trajectory partial_vel = t;
  partial_vel.velocities.assign(2, StateVec::Zero(2));
  CHECK_THROWS_AS(partial_vel.validate(), Error);
}

TEST_CASE("resampling lands on the unit grid with central-difference velocities") {
  const Trajectory demo = zigzag_demo();
  const int n = 11;
  const Trajectory r = resample_demo(demo, n);
  REQUIRE(static_cast<int>(r.size()) == n);
  REQUIRE(r.has_velocities());
  const double dt = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i) CHECK(r.times[i] == doctest::Approx(i * dt).epsilon(1e-12));
  // endpoints are preserved
  CHECK((r.states.front() - demo.states.front()).norm() <= 1e-12);
  CHECK((r.states.back() - demo.states.back()).norm() <= 1e-12);
  for (int i = 1; i + 1 < n; ++i) {
    const StateVec expect = (r.states[i + 1] - r.states[i - 1]) / (2.0 * dt);
    CHECK((r.velocities[i] - expect).norm() <= 1e-12);
  }
  CHECK((r.velocities.front() - (r.states[1] - r.states[0]) / dt).norm() <= 1e-12);
  CHECK((r.velocities.back() - (r.states[n - 1] - r.states[n - 2]) / dt).norm() <= 1e-12);
}

TEST_CASE("resampling an already uniform trajectory is idempotent") {
  const Trajectory once = resample_demo(zigzag_demo(), 25);
  const Trajectory twice = resample_demo(once, 25);
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK((once.states[i] - twice.states[i]).norm() <= 1e-12);
    CHECK((once.velocities[i] - twice.velocities[i]).norm() <= 1e-12);
  }
}

TEST_CASE("resampling rejects degenerate input") {
  Trajectory tiny;
  tiny.times = {0.0};
  tiny.states = {StateVec::Zero(2)};
  CHECK_THROWS_AS(resample_demo(tiny, 10), InvalidDemonstration);
  CHECK_THROWS_AS(resample_demo(zigzag_demo(), 1), ConfigError);
}

TEST_CASE("demo csv round-trips bit for bit") {
  const Trajectory r = resample_demo(zigzag_demo(), 17);
  const std::string path = temp_path("l1ds_demo_roundtrip.csv");
  save_demo_csv(r, path);
  const Trajectory back = load_demo_csv(path);
  REQUIRE(back.size() == r.size());
  REQUIRE(back.has_velocities());
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(back.times[i] == r.times[i]);
    CHECK((back.states[i] - r.states[i]).norm() == 0.0);
    CHECK((back.velocities[i] - r.velocities[i]).norm() == 0.0);
  }
  std::remove(path.c_str());
}

TEST_CASE("csv loader understands position-only files") {
  const std::string path = temp_path("l1ds_demo_posonly.csv");
  Trajectory t = zigzag_demo();
  save_demo_csv(t, path);
  const Trajectory back = load_demo_csv(path);
  CHECK(back.size() == t.size());
  CHECK(!back.has_velocities());
  CHECK(back.dim() == 2);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_demo_csv(temp_path("l1ds_no_such_file.csv")), Error);
}

TEST_CASE("generated demonstrations are deterministic in the seed") {
  ShapeParams p;
  p.kind = ShapeKind::circle;
  p.noise = 0.02;
  p.num_demos = 3;
  p.samples_per_demo = 60;
  const auto a = generate_demo_set(p, 42);
  const auto b = generate_demo_set(p, 42);
  const auto c = generate_demo_set(p, 43);
  REQUIRE(a.size() == 3);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      if ((a[i].states[k] - b[i].states[k]).norm() != 0.0) all_equal = false;
      if ((a[i].states[k] - c[i].states[k]).norm() != 0.0) any_diff = true;
    }
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("noise-free shapes trace their geometry") {
  ShapeParams p;
  p.noise = 0.0;
  p.num_demos = 1;
  p.samples_per_demo = 200;

  p.kind = ShapeKind::line;
  p.amplitude = 0.5;
  {
    // Points stay colinear with slope amp; the per-demo start offset shifts
    // the whole line, so the deviation is a constant within offset range.
    const Trajectory d = resample_demo(generate_demo(p, 0, 0), 100);
    double dev_min = 1e9, dev_max = -1e9;
    for (const StateVec& z : d.states) {
      const double dev = z[1] - 0.5 * z[0];
      dev_min = std::min(dev_min, dev);
      dev_max = std::max(dev_max, dev);
    }
    CHECK(dev_max - dev_min <= 1e-9);
    CHECK(std::abs(dev_max) <= 0.1);
  }

  p.kind = ShapeKind::circle;
  p.amplitude = 0.4;
  {
    const Trajectory d = resample_demo(generate_demo(p, 0, 0), 100);
    for (const StateVec& z : d.states) {
      const double rad = std::hypot(z[0] - 0.5, z[1] - 0.5);
      CHECK(rad == doctest::Approx(0.4).epsilon(0.1));
    }
  }
}

TEST_CASE("mean start averages the first states") {
  ShapeParams p;
  p.kind = ShapeKind::sine;
  p.num_demos = 4;
  p.samples_per_demo = 50;
  const auto demos = generate_demo_set(p, 5);
  const StateVec m = mean_start(demos);
  StateVec acc = StateVec::Zero(2);
  for (const auto& d : demos) acc += d.states.front();
  CHECK((m - acc / 4.0).norm() <= 1e-12);
  CHECK_THROWS_AS(mean_start({}), InvalidDemonstration);
}

TEST_CASE("shape names round-trip and unknown names are rejected") {
  for (const char* name : {"line", "sine", "angle", "circle"})
    CHECK(to_string(shape_kind_from_string(name)) == name);
  CHECK_THROWS_AS(shape_kind_from_string("helix"), ConfigError);
}
