#include "l1ds/l1.hpp"

#include <cmath>

namespace l1ds {

void L1Config::validate(int dim, double dt) const {
  if (static_cast<int>(a_s_diag.size()) != dim)
    throw ConfigError("l1.a_s_diag must have " + std::to_string(dim) + " entries");
  for (int i = 0; i < a_s_diag.size(); ++i)
    if (!(a_s_diag[i] < 0.0))
      throw ConfigError("l1.a_s_diag entries must be negative (Hurwitz)");
  if (!(omega > 0.0)) throw ConfigError("l1.omega must be positive");
  if (!(t_sample > 0.0)) throw ConfigError("l1.t_sample must be positive");
  if (dt > 0.0) {
    const double ratio = t_sample / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-6 * std::max(1.0, ratio) || std::round(ratio) < 1)
      throw ConfigError("l1.t_sample must be an integer multiple of the simulation step dt");
  }
}

int L1Config::sample_stride(double dt) const {
  return static_cast<int>(std::round(t_sample / dt));
}

L1State init_l1_state(const StateVec& z0) {
  L1State st;
  st.z_hat = z0;
  st.sigma_hat = StateVec::Zero(z0.size());
  st.u_a = StateVec::Zero(z0.size());
  st.steps_since_sample = 0;
  return st;
}

L1State predictor_step(const L1Config& cfg, const L1State& st, const StateVec& z,
                       const StateVec& f_at_z, const StateVec& u_nom, double dt) {
  const StateVec z_tilde = st.z_hat - z;
  const StateVec rate = f_at_z + u_nom + st.u_a + st.sigma_hat +
                        (cfg.a_s_diag.array() * z_tilde.array()).matrix();
  L1State out = st;
  out.z_hat += dt * rate;
  out.steps_since_sample = st.steps_since_sample + 1;
  if (!out.z_hat.allFinite()) throw Error("predictor_step: non-finite predictor state");
  return out;
}

StateVec adaptation_update(const L1Config& cfg, const StateVec& z_tilde) {
  if (z_tilde.size() != cfg.a_s_diag.size())
    throw DimensionMismatch("adaptation_update: dimension mismatch");
  StateVec sigma(z_tilde.size());
  for (int i = 0; i < z_tilde.size(); ++i) {
    const double lam = cfg.a_s_diag[i];
    const double elt = std::exp(lam * cfg.t_sample);
    sigma[i] = -(lam * elt / (elt - 1.0)) * z_tilde[i];
  }
  if (!sigma.allFinite()) throw Error("adaptation_update: non-finite estimate");
  return sigma;
}

L1State filter_step(const L1Config& cfg, const L1State& st, double dt) {
  const double decay = std::exp(-cfg.omega * dt);
  L1State out = st;
  out.u_a = decay * st.u_a + (1.0 - decay) * (-st.sigma_hat);
  return out;
}

std::pair<L1State, StateVec> l1_step(const L1Config& cfg, const L1State& st, const StateVec& z,
                                     const StateVec& f_at_z, const StateVec& u_nom, double dt) {
  L1State cur = st;
  const int stride = cfg.sample_stride(dt);
  if (cur.steps_since_sample >= stride) {
    cur.sigma_hat = adaptation_update(cfg, cur.z_hat - z);
    cur.steps_since_sample = 0;
  }
  cur = filter_step(cfg, cur, dt);
  cur = predictor_step(cfg, cur, z, f_at_z, u_nom, dt);
  return {cur, cur.u_a};
}

} // namespace l1ds
