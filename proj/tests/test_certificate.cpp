#include <l1ds/certificate.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace l1ds;

namespace {

CertificateInputs worked_inputs() {
  CertificateInputs in;
  in.delta_sigma = 0.5;
  in.l_sigma_z = 0.1;
  in.delta_f = 2.0;
  in.delta_nom = 0.3;
  in.delta_sigma_hat = 0.2;
  in.delta_b = 2.0;
  in.alpha1 = 1.0;
  in.alpha2 = 1.0;
  in.lambda = 1.0;
  in.v0 = 0.25;
  in.epsilon = 0.5;
  in.t1_minus_t0 = 0.3;
  in.dim = 2;
  in.a_s_diag = Eigen::VectorXd::Constant(2, -10.0);
  in.omega = 20.0;
  in.t_sample = 1e-3;
  return in;
}

} // namespace

TEST_CASE("certificate reproduces the worked configuration") {
  const CertificateReport r = certify(worked_inputs());
  CHECK(r.phi1 == doctest::Approx(3.0));
  CHECK(r.rho == doctest::Approx(1.0));
  CHECK(r.zeta1 == doctest::Approx(0.0352778).epsilon(1e-5));
  CHECK(r.zeta2 == doctest::Approx(7.9195959).epsilon(1e-6));
  CHECK(r.zeta3 == doctest::Approx(10.0));
  CHECK(r.zeta4 == doctest::Approx(17.9195959).epsilon(1e-6));
  CHECK(r.condition_bandwidth_ok);
  CHECK(r.ts_max == doctest::Approx(0.0379163).epsilon(1e-5));
  CHECK(r.condition_ts_ok); // 1e-3 < ts_max
  CHECK(r.ultimate_bound_mu == doctest::Approx(0.4750556).epsilon(1e-5));
  CHECK(!r.near_singular_warning);
}

TEST_CASE("zero uncertainty collapses every residual term") {
  CertificateInputs in = worked_inputs();
  in.delta_sigma = 0.0;
  in.l_sigma_z = 0.0;
  const CertificateReport r = certify(in);
  CHECK(r.zeta1 == 0.0);
  CHECK(r.zeta2 == 0.0);
  CHECK(r.zeta3 == 0.0);
  CHECK(r.zeta4 == 0.0);
  CHECK(r.condition_bandwidth_ok);
  CHECK(std::isinf(r.ts_max));
  CHECK(r.condition_ts_ok);
  // only the decayed initial transient remains
  const double mu2 = std::exp(-2.0 * in.lambda * in.t1_minus_t0) * in.v0 / in.alpha1;
  CHECK(r.ultimate_bound_mu == doctest::Approx(std::sqrt(mu2)).epsilon(1e-12));
}

TEST_CASE("residual terms grow with the uncertainty bound") {
  CertificateInputs lo = worked_inputs();
  CertificateInputs hi = worked_inputs();
  hi.delta_sigma = 1.0;
  const CertificateReport a = certify(lo);
  const CertificateReport b = certify(hi);
  CHECK(b.zeta1 > a.zeta1);
  CHECK(b.zeta2 > a.zeta2);
  CHECK(b.zeta3 > a.zeta3);
  CHECK(b.zeta4 > a.zeta4);
  CHECK(b.ultimate_bound_mu > a.ultimate_bound_mu);
  CHECK(b.ts_max < a.ts_max);
}

TEST_CASE("ultimate bound shrinks with a longer settling window") {
  CertificateInputs in = worked_inputs();
  const double mu_short = certify(in).ultimate_bound_mu;
  in.t1_minus_t0 = 0.6;
  CHECK(certify(in).ultimate_bound_mu < mu_short);
}

TEST_CASE("filter bandwidth equal to twice the decay rate is singular") {
  CertificateInputs in = worked_inputs();
  in.omega = 2.0 * in.lambda;
  CHECK_THROWS_AS(certify(in), SingularBandwidth);
  in.omega = 2.0 * in.lambda + 0.01; // close: flagged, not fatal
  CHECK(certify(in).near_singular_warning);
}

TEST_CASE("bandwidth condition fails when the tube is too small") {
  CertificateInputs in = worked_inputs();
  in.epsilon = 0.01; // rho barely above the transient
  in.v0 = 0.25;
  in.delta_b = 8.0;
  const CertificateReport r = certify(in);
  // alpha1 rho^2 = (0.5 + 0.01)^2 = 0.2601 vs 0.25 + 8 zeta1
  CHECK(!r.condition_bandwidth_ok);
  CHECK(r.ts_max == 0.0); // negative margin clamps to zero
  CHECK(!r.condition_ts_ok);
}

TEST_CASE("sampling condition fails when the period exceeds the admissible maximum") {
  CertificateInputs in = worked_inputs();
  in.t_sample = 0.05; // ts_max is about 0.0379
  const CertificateReport r = certify(in);
  CHECK(r.condition_bandwidth_ok);
  CHECK(!r.condition_ts_ok);
}
