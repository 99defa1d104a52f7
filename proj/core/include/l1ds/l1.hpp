#ifndef L1DS_L1_HPP
#define L1DS_L1_HPP

#include "l1ds/types.hpp"

#include <utility>

namespace l1ds {

/// Adaptive-controller gains: a diagonal Hurwitz predictor matrix A_s, the
/// low-pass filter bandwidth omega, and the adaptation period t_sample.
struct L1Config {
  Eigen::VectorXd a_s_diag;
  double omega = 30.0;
  double t_sample = 1e-3;

  /// Throws ConfigError unless every A_s entry is negative, omega > 0,
  /// t_sample > 0, and t_sample is an integer multiple of dt.
  void validate(int dim, double dt) const;

  /// Number of simulation steps between adaptation instants.
  int sample_stride(double dt) const;
};

/// Value-type controller state threaded through the per-step updates.
struct L1State {
  StateVec z_hat;
  StateVec sigma_hat;
  StateVec u_a;
  int steps_since_sample = 0;
};

/// Initial state: predictor starts on the plant (z_hat = z0), estimate and
/// filtered input start at zero.
L1State init_l1_state(const StateVec& z0);

/// One forward-Euler step of the state predictor
///   d(z_hat)/dt = f(z) + u_nom + u_a + sigma_hat + A_s (z_hat - z),
/// advancing z_hat by dt and incrementing the sample counter.
L1State predictor_step(const L1Config& cfg, const L1State& st, const StateVec& z,
                       const StateVec& f_at_z, const StateVec& u_nom, double dt);

/// Piecewise-constant adaptation evaluated at a sampling instant. For
/// diagonal A_s the update is componentwise:
///   sigma_hat_k = -(lam_k e^{lam_k Ts} / (e^{lam_k Ts} - 1)) * z_tilde_k,
/// the exact inverse of the sampled prediction-error dynamics.
StateVec adaptation_update(const L1Config& cfg, const StateVec& z_tilde);

/// Exact zero-order-hold discretization of the first-order lag
/// du_a/dt = -omega u_a - omega sigma_hat:
///   u_a <- e^{-omega dt} u_a + (1 - e^{-omega dt}) (-sigma_hat).
L1State filter_step(const L1Config& cfg, const L1State& st, double dt);

/// One controller tick at a sample of z. If an adaptation instant has been
/// reached, sigma_hat is refreshed from the same-time gap z_hat - z before
/// anything else moves; the filter then produces the u_a applied over the
/// coming step, and finally the predictor advances z_hat to the next sample.
std::pair<L1State, StateVec> l1_step(const L1Config& cfg, const L1State& st, const StateVec& z,
                                     const StateVec& f_at_z, const StateVec& u_nom, double dt);

} // namespace l1ds

#endif
