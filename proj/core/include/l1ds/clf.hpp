#ifndef L1DS_CLF_HPP
#define L1DS_CLF_HPP

#include "l1ds/types.hpp"

namespace l1ds {

/// Quadratic Lyapunov candidate V(e) = e'Pe with decay rate c: the stabilizer
/// enforces dV/dt <= -c V along the tracking error.
struct ClfConfig {
  double c = 2.0;
  Eigen::MatrixXd P;

  /// Throws ConfigError unless c > 0 and P is symmetric positive definite of
  /// the given dimension.
  void validate(int dim) const;

  double alpha1() const; // smallest eigenvalue of P
  double alpha2() const; // largest eigenvalue of P
  double lambda() const { return 0.5 * c; }
  /// Gradient bound of V on a tube of radius rho: 2 * alpha2 * rho.
  double delta_b(double rho) const { return 2.0 * alpha2() * rho; }

  static ClfConfig diagonal(double c, const Eigen::VectorXd& p_diag);
};

double clf_value(const ClfConfig& cfg, const StateVec& e);

/// Minimum-norm solution of min |u|^2 s.t. a'u + b <= 0 for a != 0:
/// zero when b <= 0, otherwise -(b/|a|^2) a. Exposed for oracle testing.
StateVec min_norm_halfspace(const StateVec& a, double b);

/// Closed-form CLF-QP stabilizer. With a = 2Pe and
/// b = a'(f_at_z - f_at_zstar) + c e'Pe, returns the minimum-norm input for
/// which the decrease condition a'(f_at_z - f_at_zstar + u) + c e'Pe <= 0
/// holds; the constraint is tight whenever the returned input is nonzero.
StateVec clf_qp(const ClfConfig& cfg, const StateVec& f_at_z, const StateVec& f_at_zstar,
                const StateVec& e);

} // namespace l1ds

#endif
