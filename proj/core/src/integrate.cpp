#include "l1ds/integrate.hpp"

namespace l1ds {

RolloutResult rollout(const VectorFieldModel& model, const StateVec& z0, double dt, int steps,
                      const DomainBox* bounds) {
  if (dt <= 0) throw ConfigError("rollout: dt must be positive");
  if (steps < 1) throw ConfigError("rollout: steps must be at least 1");
  if (static_cast<int>(z0.size()) != model.dim())
    throw DimensionMismatch("rollout: initial state dimension mismatch");
  if (!z0.allFinite()) throw Error("rollout: non-finite initial state");

  RolloutResult out;
  out.trajectory.times.resize(steps + 1);
  out.trajectory.states.resize(steps + 1);

  auto f = [&model](const StateVec& z, double) { return eval_field(model, z); };

  StateVec z = z0;
  out.trajectory.times[0] = 0.0;
  out.trajectory.states[0] = z;
  for (int i = 0; i < steps; ++i) {
    if (!out.truncated) {
      StateVec next = rk4_step(f, z, i * dt, dt);
      if (!next.allFinite() || (bounds && !bounds->contains(next)))
        out.truncated = true;
      else
        z = std::move(next);
    }
    out.trajectory.times[i + 1] = (i + 1) * dt;
    out.trajectory.states[i + 1] = z;
  }
  return out;
}

} // namespace l1ds
