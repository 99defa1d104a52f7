#include "l1ds/certificate.hpp"

#include <cmath>
#include <limits>

namespace l1ds {

CertificateReport certify(const CertificateInputs& in) {
  if (in.dim < 1) throw ConfigError("certify: dim must be at least 1");
  if (in.alpha1 <= 0 || in.alpha2 <= 0 || in.alpha2 < in.alpha1)
    throw ConfigError("certify: need 0 < alpha1 <= alpha2");
  if (in.lambda <= 0) throw ConfigError("certify: lambda must be positive");
  if (in.omega <= 0) throw ConfigError("certify: omega must be positive");
  if (in.epsilon <= 0) throw ConfigError("certify: epsilon must be positive");
  if (in.delta_sigma < 0 || in.l_sigma_z < 0 || in.delta_f < 0 || in.delta_nom < 0 ||
      in.delta_sigma_hat < 0 || in.delta_b < 0 || in.v0 < 0 || in.t1_minus_t0 < 0 ||
      in.t_sample <= 0)
    throw ConfigError("certify: negative input where a nonnegative bound is required");
  if (in.omega == 2.0 * in.lambda)
    throw SingularBandwidth(
        "certify: omega equals 2*lambda, where the filter constant zeta1 is undefined; "
        "separate the filter bandwidth from the error decay rate");

  CertificateReport rep;
  rep.near_singular_warning = std::abs(2.0 * in.lambda - in.omega) < 0.1 * in.omega;

  rep.phi1 = in.delta_f + in.delta_nom + in.delta_sigma_hat + in.delta_sigma;
  // Worst-case initial error consistent with v0: |e(t0)| = sqrt(v0/alpha1).
  rep.rho = std::sqrt(in.v0 / in.alpha1) * std::sqrt(in.alpha2 / in.alpha1) + in.epsilon;

  const double sqrt_d = std::sqrt(static_cast<double>(in.dim));
  double max_abs_as = 0.0;
  for (int i = 0; i < in.a_s_diag.size(); ++i)
    max_abs_as = std::max(max_abs_as, std::abs(in.a_s_diag[i]));

  rep.zeta1 = in.delta_sigma / std::abs(2.0 * in.lambda - in.omega) +
              in.l_sigma_z * rep.phi1 / (2.0 * in.lambda * in.omega);
  rep.zeta2 = 2.0 * sqrt_d * in.l_sigma_z * rep.phi1 + sqrt_d * max_abs_as * in.delta_sigma;
  rep.zeta3 = in.delta_sigma * in.omega;
  rep.zeta4 = in.delta_b * (rep.zeta2 + rep.zeta3) / (2.0 * in.lambda);

  const double margin = in.alpha1 * rep.rho * rep.rho - in.v0 - in.delta_b * rep.zeta1;
  rep.condition_bandwidth_ok = margin > 0.0;
  if (rep.zeta4 > 0.0)
    rep.ts_max = std::max(0.0, margin / rep.zeta4);
  else
    rep.ts_max = margin > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  rep.condition_ts_ok = in.t_sample <= rep.ts_max;

  rep.ultimate_bound_mu =
      std::sqrt((std::exp(-2.0 * in.lambda * in.t1_minus_t0) * in.v0 + in.delta_b * rep.zeta1 +
                 rep.zeta4 * in.t_sample) /
                in.alpha1);
  return rep;
}

} // namespace l1ds
