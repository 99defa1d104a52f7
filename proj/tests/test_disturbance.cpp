#include <doctest.h>

#include <l1ds/disturbance.hpp>

#include <cmath>
#include <numbers>

using namespace l1ds;

namespace {

DisturbanceSpec constant_spec(double a0, double a1, Channel ch = Channel::task) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::constant;
  s.channel = ch;
  s.amplitude = Eigen::Vector2d(a0, a1);
  return s;
}

} // namespace

TEST_CASE("constant disturbance is flat in time") {
  const DisturbanceSpec s = constant_spec(0.5, -0.3);
  for (double t : {0.0, 0.25, 0.99, 1.0}) {
    const StateVec v = eval_disturbance(s, t);
    CHECK(v[0] == 0.5);
    CHECK(v[1] == -0.3);
  }
}

TEST_CASE("step disturbance switches on at its start time") {
  DisturbanceSpec s = constant_spec(1.0, 2.0);
  s.kind = DisturbanceKind::step;
  s.start = 0.25;
  CHECK(eval_disturbance(s, 0.0).isZero());
  CHECK(eval_disturbance(s, 0.2499).isZero());
  CHECK(eval_disturbance(s, 0.25)[0] == 1.0); // boundary included
  CHECK(eval_disturbance(s, 0.9)[1] == 2.0);
}

TEST_CASE("pulse train is active exactly on its right-open windows") {
  DisturbanceSpec s = constant_spec(2.0, 0.0);
  s.kind = DisturbanceKind::pulse_train;
  s.windows = {{0.1, 0.2}, {0.5, 0.6}};
  CHECK(eval_disturbance(s, 0.05).isZero());
  CHECK(eval_disturbance(s, 0.1)[0] == 2.0);  // left edge in
  CHECK(eval_disturbance(s, 0.15)[0] == 2.0);
  CHECK(eval_disturbance(s, 0.2).isZero());   // right edge out
  CHECK(eval_disturbance(s, 0.55)[0] == 2.0);
  CHECK(eval_disturbance(s, 0.6).isZero());
  CHECK(eval_disturbance(s, 0.95).isZero());
}

TEST_CASE("multi sine sums per-axis components") {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::multi_sine;
  s.sines = {{{1.0, 2.0, 0.0}, {0.5, 5.0, 0.3}}, {{2.0, 1.0, 1.0}}};
  const double t = 0.37;
  const double pi2 = 2.0 * std::numbers::pi;
  const double want0 = std::sin(pi2 * 2.0 * t) + 0.5 * std::sin(pi2 * 5.0 * t + 0.3);
  const double want1 = 2.0 * std::sin(pi2 * 1.0 * t + 1.0);
  const StateVec v = eval_disturbance(s, t);
  CHECK(v[0] == doctest::Approx(want0).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(want1).epsilon(1e-14));
  CHECK(s.dim() == 2);
}

TEST_CASE("channel evaluation sums only the specs routed to that channel") {
  std::vector<DisturbanceSpec> specs;
  specs.push_back(constant_spec(1.0, 0.0, Channel::task));
  specs.push_back(constant_spec(0.5, 0.5, Channel::task));
  specs.push_back(constant_spec(-3.0, 1.0, Channel::matched));
  const StateVec task = eval_channel(specs, Channel::task, 0.5, 2);
  CHECK(task[0] == 1.5);
  CHECK(task[1] == 0.5);
  const StateVec matched = eval_channel(specs, Channel::matched, 0.5, 2);
  CHECK(matched[0] == -3.0);
  const StateVec um = eval_channel(specs, Channel::unmatched, 0.5, 2);
  CHECK(um.isZero());
  CHECK(um.size() == 2);
}

TEST_CASE("scripted max norm finds the peak of the summed channel signal") {
  // Constant alone: norm is exact at every grid point.
  std::vector<DisturbanceSpec> specs;
  specs.push_back(constant_spec(3.0, 4.0));
  CHECK(scripted_max_norm(specs, Channel::task, 2) == doctest::Approx(5.0).epsilon(1e-12));

  // Single sine on one axis: peak amp (grid resolves the crest of one cycle).
  DisturbanceSpec sine;
  sine.kind = DisturbanceKind::multi_sine;
  sine.channel = Channel::matched;
  sine.sines = {{{2.0, 1.0, 0.0}}, {}};
  specs.push_back(sine);
  CHECK(scripted_max_norm(specs, Channel::matched, 2) == doctest::Approx(2.0).epsilon(1e-5));

  // Pulse windows raise the max only while active.
  DisturbanceSpec pulse = constant_spec(1.0, 0.0, Channel::matched);
  pulse.kind = DisturbanceKind::pulse_train;
  pulse.windows = {{0.2, 0.3}};
  specs.push_back(pulse);
  const double peak = scripted_max_norm(specs, Channel::matched, 2);
  CHECK(peak > 2.0);
  CHECK(peak <= 3.0 + 1e-12);
}

TEST_CASE("state gain accumulates over task specs only") {
  std::vector<DisturbanceSpec> specs;
  DisturbanceSpec a = constant_spec(0.1, 0.0, Channel::task);
  a.state_gain = 0.2;
  DisturbanceSpec b = constant_spec(0.1, 0.0, Channel::task);
  b.state_gain = -0.3;
  std::vector<DisturbanceSpec> both = {a, b};
  CHECK(total_state_gain(both) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(total_state_gain({}) == 0.0);
}

TEST_CASE("disturbance validation rejects malformed specs") {
  DisturbanceSpec s = constant_spec(1.0, 2.0);
  CHECK_NOTHROW(s.validate(2));
  CHECK_THROWS_AS(s.validate(3), ConfigError);

  DisturbanceSpec st = s;
  st.kind = DisturbanceKind::step;
  st.start = 1.5;
  CHECK_THROWS_AS(st.validate(2), ConfigError);

  DisturbanceSpec pl = s;
  pl.kind = DisturbanceKind::pulse_train;
  pl.windows = {{0.4, 0.4}};
  CHECK_THROWS_AS(pl.validate(2), ConfigError);
  pl.windows = {{0.5, 0.4}};
  CHECK_THROWS_AS(pl.validate(2), ConfigError);
  pl.windows = {{0.4, 1.2}};
  CHECK_THROWS_AS(pl.validate(2), ConfigError);

  DisturbanceSpec sg = constant_spec(1.0, 0.0, Channel::matched);
  sg.state_gain = 0.1;
  CHECK_THROWS_AS(sg.validate(2), ConfigError);
  sg.channel = Channel::task;
  CHECK_NOTHROW(sg.validate(2));

  DisturbanceSpec an = s;
  an.anchor = {1.0};
  CHECK_THROWS_AS(an.validate(2), ConfigError);
  an.anchor = {1.0, 2.0};
  CHECK_NOTHROW(an.validate(2));
}

TEST_CASE("kind and channel names round trip and reject unknowns") {
  for (DisturbanceKind k : {DisturbanceKind::constant, DisturbanceKind::step,
                            DisturbanceKind::pulse_train, DisturbanceKind::multi_sine})
    CHECK(disturbance_kind_from_string(to_string(k)) == k);
  for (Channel c : {Channel::task, Channel::matched, Channel::unmatched})
    CHECK(channel_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(disturbance_kind_from_string("ramp"), ConfigError);
  CHECK_THROWS_AS(channel_from_string("output"), ConfigError);
}
