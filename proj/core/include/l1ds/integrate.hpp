#ifndef L1DS_INTEGRATE_HPP
#define L1DS_INTEGRATE_HPP

#include "l1ds/rbf_field.hpp"
#include "l1ds/types.hpp"

namespace l1ds {

/// One classical 4th-order Runge-Kutta step of dz/dt = f(z, t).
template <typename F>
StateVec rk4_step(F&& f, const StateVec& z, double t, double dt) {
  const StateVec k1 = f(z, t);
  const StateVec k2 = f(z + 0.5 * dt * k1, t + 0.5 * dt);
  const StateVec k3 = f(z + 0.5 * dt * k2, t + 0.5 * dt);
  const StateVec k4 = f(z + dt * k3, t + dt);
  return z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct RolloutResult {
  Trajectory trajectory; // steps + 1 samples at times 0, dt, ..., steps*dt
  bool truncated = false;
};

/// Integrates dz*/dt = f(z*) with fixed-step RK4. If `bounds` is given and a
/// step would leave it, integration stops there: the trajectory keeps its full
/// length with the last in-bounds state repeated, and `truncated` is set.
RolloutResult rollout(const VectorFieldModel& model, const StateVec& z0, double dt, int steps,
                      const DomainBox* bounds = nullptr);

} // namespace l1ds

#endif
