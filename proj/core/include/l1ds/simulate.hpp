#ifndef L1DS_SIMULATE_HPP
#define L1DS_SIMULATE_HPP

#include "l1ds/clf.hpp"
#include "l1ds/disturbance.hpp"
#include "l1ds/dtw.hpp"
#include "l1ds/l1.hpp"
#include "l1ds/rbf_field.hpp"
#include "l1ds/selector.hpp"
#include "l1ds/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace l1ds {

enum class SelectorMode { dtw, time_indexed };

struct SelectorConfig {
  SelectorMode mode = SelectorMode::dtw;
  int window_w = 50;
  int history_h = 40;
  int target_history = 0; // 0 = same as history_h
};

struct PidGains {
  double kp = 400.0;
  double ki = 100.0;
  double kd = 40.0;
};

/// Everything one closed-loop run needs. The target trajectory is the
/// precomputed nominal rollout (same grid length as the run), and `bounds` is
/// the truncation box; a run whose state leaves it is frozen there and
/// flagged, never silently continued.
struct RunSetup {
  const VectorFieldModel* model = nullptr;
  Trajectory target;
  ClfConfig clf;
  bool clf_enabled = true;
  std::optional<L1Config> l1;
  SelectorConfig selector;
  std::vector<DisturbanceSpec> disturbances;
  StateVec z0;
  int n = 1000; // grid points; the step is dt = 1/(n-1)
  PidGains pid;
  double integral_clamp = 0.0; // 0 = derive from disturbance amplitudes
  std::vector<std::pair<double, double>> hold_windows;
  DomainBox bounds;

  double dt() const { return 1.0 / (n - 1); }
};

struct RunResult {
  Trajectory executed;  // z(t) on the outer grid
  Trajectory target;    // the shared nominal rollout
  Trajectory reference; // z_ref(t)
  std::vector<int> selector_indices;
  std::vector<StateVec> zstar_trace; // per-step selected target point
  std::vector<StateVec> u_nom_trace;
  std::vector<StateVec> u_a_trace;
  std::vector<StateVec> sigma_hat_trace;
  std::vector<StateVec> dm_trace;  // perfect regime: applied task disturbance
  std::vector<StateVec> dum_trace;
  double dtw_raw = 0.0; // unbanded DTW(executed, target)
  bool truncated = false;
};

/// Perfect command following: the task-space state follows
///   dz/dt = f(z) + u_nom(z, z*) + u_a + sigma(t, z)
/// integrated with fixed-step RK4. u_a, sigma_hat, and the selected target
/// are held over each outer step; the stabilizer is re-evaluated at the RK4
/// stage points so the enforced Lyapunov decay survives discretization. With
/// the time-indexed selector the target-grid state advances jointly through
/// the same stages.
RunResult run_perfect(const RunSetup& setup);

/// Imperfect command following: a per-axis double integrator
///   dp/dt = v + d_um,  dv/dt = u_pid + d_m
/// tracks the reference (z_ref, dz_ref) produced by the task stack from the
/// measured position, with the PID loop running 10 inner Euler substeps per
/// outer step. The executed trajectory is the plant position on the outer
/// grid.
RunResult run_imperfect(const RunSetup& setup);

/// Ratio of DTW(executed, target) scores between a controller variant and
/// the uncontrolled nominal baseline of the same experiment. Throws
/// DegenerateBaseline when the baseline score vanishes.
double normalized_dtw(const RunResult& variant, const RunResult& baseline,
                      const DtwParams& band = {});

} // namespace l1ds

#endif
