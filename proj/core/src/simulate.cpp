#include "l1ds/simulate.hpp"

#include "l1ds/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace l1ds {

namespace {

// Scripted task disturbance plus the state-linear part each spec carries.
StateVec task_sigma(const std::vector<DisturbanceSpec>& specs, double t, const StateVec& z,
                    const StateVec& default_anchor) {
  StateVec out = StateVec::Zero(z.size());
  for (const auto& s : specs) {
    if (s.channel != Channel::task) continue;
    out += eval_disturbance(s, t);
    if (s.state_gain != 0.0) {
      if (s.anchor.empty()) {
        out.noalias() += s.state_gain * (z - default_anchor);
      } else {
        Eigen::Map<const Eigen::VectorXd> a(s.anchor.data(),
                                            static_cast<Eigen::Index>(s.anchor.size()));
        out.noalias() += s.state_gain * (z - a);
      }
    }
  }
  return out;
}

bool in_hold(const std::vector<std::pair<double, double>>& windows, double t) {
  for (const auto& w : windows)
    if (t >= w.first && t < w.second) return true;
  return false;
}

void check_setup(const RunSetup& s, bool perfect) {
  if (!s.model) throw ConfigError("run: no vector field model");
  const int d = s.model->dim();
  if (s.n < 2) throw ConfigError("run: need at least two grid points");
  if (static_cast<int>(s.z0.size()) != d)
    throw DimensionMismatch("run: initial state dimension mismatch");
  if (!s.z0.allFinite()) throw Error("run: non-finite initial state");
  if (s.target.empty()) throw ConfigError("run: empty target trajectory");
  if (s.target.dim() != d) throw DimensionMismatch("run: target dimension mismatch");
  if (s.clf_enabled) s.clf.validate(d);
  if (s.l1) s.l1->validate(d, s.dt());
  if (s.selector.mode == SelectorMode::dtw) {
    if (s.selector.window_w < 1 || s.selector.history_h < 1 || s.selector.target_history < 0)
      throw ConfigError("run: selector windows must be positive");
  }
  for (const auto& spec : s.disturbances) {
    spec.validate(d);
    if (perfect && spec.channel != Channel::task)
      throw ConfigError("run: matched/unmatched disturbances need the imperfect regime");
    if (!perfect && spec.channel == Channel::task)
      throw ConfigError("run: task-channel disturbances need the perfect regime");
  }
  if (s.bounds.dim() != 0 && s.bounds.dim() != d)
    throw DimensionMismatch("run: truncation box dimension mismatch");
  for (const auto& w : s.hold_windows)
    if (!(w.first < w.second)) throw ConfigError("run: empty hold window");
}

// Shared per-step front half of both regimes: record state, update the
// executed history, pick the target point, evaluate the stabilizer and the
// adaptive input. Returns everything the regime-specific integrator needs.
struct StepDecision {
  int k_sel = 1;
  StateVec z_star;
  StateVec f_z;
  StateVec u_nom;
  StateVec u_a;
};

class TargetSelection {
public:
  TargetSelection(const RunSetup& setup)
      : setup_(setup), use_dtw_(setup.selector.mode == SelectorMode::dtw) {
    const int hp =
        setup.selector.target_history > 0 ? setup.selector.target_history : setup.selector.history_h;
    if (use_dtw_)
      state_ = init_selector(setup.target.states, setup.z0, setup.selector.window_w,
                             setup.selector.history_h, hp);
    history_.reserve(setup.selector.history_h + 1);
  }

  // Push the newest executed sample, then return the 1-based target index.
  int advance(const StateVec& z, int step) {
    history_.push_back(z);
    if (static_cast<int>(history_.size()) > setup_.selector.history_h + 1)
      history_.erase(history_.begin());
    if (!use_dtw_) return std::min(step + 1, static_cast<int>(setup_.target.size()));
    SelectResult r = select_target(state_, history_, setup_.target.states);
    state_ = r.state;
    return r.k_new;
  }

  bool time_indexed() const { return !use_dtw_; }

private:
  const RunSetup& setup_;
  bool use_dtw_;
  SelectorState state_;
  std::vector<StateVec> history_;
};

} // namespace

RunResult run_perfect(const RunSetup& setup) {
  check_setup(setup, true);
  const VectorFieldModel& model = *setup.model;
  const int d = model.dim();
  const int n = setup.n;
  const double dt = setup.dt();
  const int N = static_cast<int>(setup.target.size());
  const bool use_bounds = setup.bounds.dim() == d;
  const StateVec anchor = model.domain.center();

  RunResult out;
  out.target = setup.target;
  out.executed.times.resize(n);
  out.executed.states.resize(n);
  out.reference.times.resize(n);
  out.reference.states.resize(n);
  out.selector_indices.resize(n);
  out.zstar_trace.resize(n);
  out.u_nom_trace.resize(n);
  out.u_a_trace.resize(n);
  out.sigma_hat_trace.resize(n);
  out.dm_trace.resize(n);
  out.dum_trace.resize(n);

  TargetSelection selection(setup);
  std::optional<L1State> l1s;
  if (setup.l1) l1s = init_l1_state(setup.z0);

  StateVec z = setup.z0;
  StateVec u_a = StateVec::Zero(d);
  StateVec sigma_hat = StateVec::Zero(d);
  bool truncated = false;

  for (int k = 0; k < n; ++k) {
    const double t = k * dt;
    out.executed.times[k] = t;
    out.executed.states[k] = z;
    out.reference.times[k] = t;
    out.reference.states[k] = z; // followed exactly in this regime

    const int k_sel = selection.advance(z, k);
    const StateVec& z_star = setup.target.states[k_sel - 1];
    out.selector_indices[k] = k_sel;
    out.zstar_trace[k] = z_star;

    const StateVec f_z = eval_field(model, z);
    StateVec u_nom = StateVec::Zero(d);
    if (setup.clf_enabled)
      u_nom = clf_qp(setup.clf, f_z, eval_field(model, z_star), z - z_star);

    if (setup.l1) {
      auto [next, applied] = l1_step(*setup.l1, *l1s, z, f_z, u_nom, dt);
      l1s = std::move(next);
      u_a = applied;
      sigma_hat = l1s->sigma_hat;
    }

    const StateVec sigma_now = task_sigma(setup.disturbances, t, z, anchor);
    out.u_nom_trace[k] = u_nom;
    out.u_a_trace[k] = u_a;
    out.sigma_hat_trace[k] = sigma_hat;
    out.dm_trace[k] = sigma_now;
    out.dum_trace[k] = StateVec::Zero(d);

    if (k == n - 1 || truncated) continue;
    if (in_hold(setup.hold_windows, t)) continue; // state pinned, controller keeps running

    // One outer RK4 step of dz/dt = f(z) + u_nom(z, z*) + u_a + sigma(t, z).
    // The stabilizer is re-evaluated at every stage; u_a is held. With the
    // time-indexed selector the target point moves through the same stages
    // (reconstructed with the exact rollout arithmetic, so its endpoint is
    // the next stored target sample); the phase selector instead commits to
    // one target point for the whole step.
    StateVec z_next;
    const bool joint = selection.time_indexed() && k + 1 < N;
    auto stage_rate = [&](const StateVec& za, const StateVec& zb, double ts) {
      const StateVec fa = eval_field(model, za);
      StateVec u = StateVec::Zero(d);
      if (setup.clf_enabled) u = clf_qp(setup.clf, fa, eval_field(model, zb), za - zb);
      return StateVec(fa + u + u_a + task_sigma(setup.disturbances, ts, za, anchor));
    };
    if (joint) {
      const StateVec& zs = setup.target.states[k]; // == z_star here
      const StateVec s1 = eval_field(model, zs);
      const StateVec zs2 = zs + 0.5 * dt * s1;
      const StateVec s2 = eval_field(model, zs2);
      const StateVec zs3 = zs + 0.5 * dt * s2;
      const StateVec s3 = eval_field(model, zs3);
      const StateVec zs4 = zs + dt * s3;
      const StateVec k1 = f_z + u_nom + u_a + sigma_now;
      const StateVec k2 = stage_rate(z + 0.5 * dt * k1, zs2, t + 0.5 * dt);
      const StateVec k3 = stage_rate(z + 0.5 * dt * k2, zs3, t + 0.5 * dt);
      const StateVec k4 = stage_rate(z + dt * k3, zs4, t + dt);
      z_next = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      const StateVec k1 = f_z + u_nom + u_a + sigma_now;
      const StateVec k2 = stage_rate(z + 0.5 * dt * k1, z_star, t + 0.5 * dt);
      const StateVec k3 = stage_rate(z + 0.5 * dt * k2, z_star, t + 0.5 * dt);
      const StateVec k4 = stage_rate(z + dt * k3, z_star, t + dt);
      z_next = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    if (!z_next.allFinite() || (use_bounds && !setup.bounds.contains(z_next)))
      truncated = true;
    else
      z = std::move(z_next);
  }

  out.truncated = truncated;
  out.dtw_raw = dtw_distance(out.executed.states, out.target.states);
  return out;
}

RunResult run_imperfect(const RunSetup& setup) {
  check_setup(setup, false);
  const VectorFieldModel& model = *setup.model;
  const int d = model.dim();
  const int n = setup.n;
  const double dt = setup.dt();
  const double h = dt / 10.0;
  const bool use_bounds = setup.bounds.dim() == d;

  double clamp = setup.integral_clamp;
  if (clamp <= 0.0) {
    double amp = std::max(scripted_max_norm(setup.disturbances, Channel::matched, d),
                          scripted_max_norm(setup.disturbances, Channel::unmatched, d));
    amp = std::max(amp, 1.0);
    clamp = setup.pid.ki > 0.0 ? 10.0 * amp / setup.pid.ki
                               : std::numeric_limits<double>::infinity();
  }

  RunResult out;
  out.target = setup.target;
  out.executed.times.resize(n);
  out.executed.states.resize(n);
  out.reference.times.resize(n);
  out.reference.states.resize(n);
  out.selector_indices.resize(n);
  out.zstar_trace.resize(n);
  out.u_nom_trace.resize(n);
  out.u_a_trace.resize(n);
  out.sigma_hat_trace.resize(n);
  out.dm_trace.resize(n);
  out.dum_trace.resize(n);

  TargetSelection selection(setup);
  std::optional<L1State> l1s;
  if (setup.l1) l1s = init_l1_state(setup.z0);

  StateVec p = setup.z0;          // plant position, doubles as the measured task state
  StateVec v = StateVec::Zero(d); // plant velocity, initialized from the first command
  StateVec integ = StateVec::Zero(d);
  StateVec z_ref = setup.z0;
  StateVec u_a = StateVec::Zero(d);
  StateVec sigma_hat = StateVec::Zero(d);
  bool v_initialized = false;
  bool truncated = false;

  for (int k = 0; k < n; ++k) {
    const double t = k * dt;
    out.executed.times[k] = t;
    out.executed.states[k] = p;
    out.reference.times[k] = t;
    out.reference.states[k] = z_ref;

    const int k_sel = selection.advance(p, k);
    const StateVec& z_star = setup.target.states[k_sel - 1];
    out.selector_indices[k] = k_sel;
    out.zstar_trace[k] = z_star;

    const StateVec f_z = eval_field(model, p);
    StateVec u_nom = StateVec::Zero(d);
    if (setup.clf_enabled)
      u_nom = clf_qp(setup.clf, f_z, eval_field(model, z_star), p - z_star);

    if (setup.l1) {
      auto [next, applied] = l1_step(*setup.l1, *l1s, p, f_z, u_nom, dt);
      l1s = std::move(next);
      u_a = applied;
      sigma_hat = l1s->sigma_hat;
    }

    const StateVec zdot_ref = f_z + u_nom + u_a; // command held over the step
    if (!v_initialized) {
      v = zdot_ref; // plant starts already moving with the initial command
      v_initialized = true;
    }

    out.u_nom_trace[k] = u_nom;
    out.u_a_trace[k] = u_a;
    out.sigma_hat_trace[k] = sigma_hat;
    out.dm_trace[k] = eval_channel(setup.disturbances, Channel::matched, t, d);
    out.dum_trace[k] = eval_channel(setup.disturbances, Channel::unmatched, t, d);

    if (k == n - 1) continue;

    if (!truncated && !in_hold(setup.hold_windows, t)) {
      // Inner loop: per-axis PID on the double integrator at 10x rate, with
      // the outer reference sample held. d_um shifts the velocity seen by
      // the position integrator; d_m shifts the commanded acceleration.
      const StateVec p_prev = p;
      const StateVec v_prev = v;
      const StateVec integ_prev = integ;
      for (int i = 0; i < 10; ++i) {
        const double ts = t + i * h;
        const StateVec dm = eval_channel(setup.disturbances, Channel::matched, ts, d);
        const StateVec dum = eval_channel(setup.disturbances, Channel::unmatched, ts, d);
        const StateVec err = z_ref - p;
        integ += h * err;
        integ = integ.cwiseMax(-clamp).cwiseMin(clamp);
        const StateVec u =
            setup.pid.kp * err + setup.pid.kd * (zdot_ref - v) + setup.pid.ki * integ;
        const StateVec p_next = p + h * (v + dum);
        v += h * (u + dm);
        p = p_next;
      }
      if (!p.allFinite() || !v.allFinite() || (use_bounds && !setup.bounds.contains(p))) {
        truncated = true;
        p = p_prev;
        v = v_prev;
        integ = integ_prev;
      }
    }

    z_ref += dt * zdot_ref; // reference generator runs regardless of holds
  }

  out.truncated = truncated;
  out.dtw_raw = dtw_distance(out.executed.states, out.target.states);
  return out;
}

double normalized_dtw(const RunResult& variant, const RunResult& baseline, const DtwParams& band) {
  if (variant.target.size() != baseline.target.size())
    throw ConfigError("normalized_dtw: runs do not share a target trajectory");
  for (std::size_t i = 0; i < variant.target.size(); ++i) {
    if ((variant.target.states[i] - baseline.target.states[i]).norm() > 1e-12)
      throw ConfigError("normalized_dtw: runs do not share a target trajectory");
  }
  const double denom = dtw_distance(baseline.executed.states, baseline.target.states, band);
  if (denom <= 1e-9)
    throw DegenerateBaseline(
        "normalized_dtw: baseline deviation is numerically zero; the ratio is undefined");
  const double num = dtw_distance(variant.executed.states, variant.target.states, band);
  return num / denom;
}

} // namespace l1ds
