#ifndef L1DS_CERTIFICATE_HPP
#define L1DS_CERTIFICATE_HPP

#include "l1ds/types.hpp"

namespace l1ds {

/// Constants feeding the tube certificate. The uncertainty is bounded by
/// delta_sigma with state-Lipschitz constant l_sigma_z; delta_f, delta_nom,
/// and delta_sigma_hat bound the field, the stabilizer, and the estimator
/// along the run, so phi1 = delta_f + delta_nom + delta_sigma_hat +
/// delta_sigma bounds the executed velocity. alpha1/alpha2 bound the
/// Lyapunov function, lambda is the enforced decay rate, delta_b the
/// gradient bound on the tube, v0 the initial Lyapunov value, and epsilon
/// the tube margin.
struct CertificateInputs {
  double delta_sigma = 0.0;
  double l_sigma_z = 0.0;
  double delta_f = 0.0;
  double delta_nom = 0.0;
  double delta_sigma_hat = 0.0;
  double delta_b = 0.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double lambda = 1.0;
  double v0 = 0.0;
  double epsilon = 0.5;
  double t1_minus_t0 = 0.3;
  int dim = 2;
  Eigen::VectorXd a_s_diag;
  double omega = 20.0;
  double t_sample = 1e-3;
};

struct CertificateReport {
  double phi1 = 0.0;
  double rho = 0.0;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double zeta3 = 0.0;
  double zeta4 = 0.0;
  bool condition_bandwidth_ok = false;
  double ts_max = 0.0; // +inf when zeta4 = 0 and the margin is positive
  bool condition_ts_ok = false;
  double ultimate_bound_mu = 0.0;
  bool near_singular_warning = false; // |2 lambda - omega| < 0.1 omega
};

/// Evaluates the tube-certificate constants
///   zeta1 = delta_sigma/|2 lambda - omega| + l_sigma_z phi1/(2 lambda omega)
///   zeta2 = 2 sqrt(d) l_sigma_z phi1 + sqrt(d) max_k|a_s_k| delta_sigma
///   zeta3 = delta_sigma omega
///   zeta4 = delta_b (zeta2 + zeta3)/(2 lambda)
/// together with the bandwidth condition alpha1 rho^2 > v0 + delta_b zeta1,
/// the largest admissible sampling period ts_max, and the ultimate bound
///   mu = sqrt((e^{-2 lambda (t1-t0)} v0 + delta_b zeta1 + zeta4 Ts)/alpha1).
/// Throws SingularBandwidth when omega = 2 lambda.
CertificateReport certify(const CertificateInputs& in);

} // namespace l1ds

#endif
