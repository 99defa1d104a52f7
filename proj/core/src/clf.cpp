#include "l1ds/clf.hpp"

#include <Eigen/Eigenvalues>

namespace l1ds {

void ClfConfig::validate(int dim) const {
  if (c <= 0) throw ConfigError("clf.c must be positive");
  if (P.rows() != dim || P.cols() != dim)
    throw ConfigError("clf P matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
  if (!P.isApprox(P.transpose(), 1e-12)) throw ConfigError("clf P matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  if (es.eigenvalues().minCoeff() <= 0) throw ConfigError("clf P matrix must be positive definite");
}

double ClfConfig::alpha1() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  return es.eigenvalues().minCoeff();
}

double ClfConfig::alpha2() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  return es.eigenvalues().maxCoeff();
}

ClfConfig ClfConfig::diagonal(double c, const Eigen::VectorXd& p_diag) {
  ClfConfig cfg;
  cfg.c = c;
  cfg.P = p_diag.asDiagonal();
  return cfg;
}

double clf_value(const ClfConfig& cfg, const StateVec& e) {
  if (e.size() != cfg.P.rows()) throw DimensionMismatch("clf_value: dimension mismatch");
  return e.dot(cfg.P * e);
}

StateVec min_norm_halfspace(const StateVec& a, double b) {
  if (b <= 0.0) return StateVec::Zero(a.size());
  const double nn = a.squaredNorm();
  if (nn == 0.0) throw Error("min_norm_halfspace: infeasible constraint (a = 0, b > 0)");
  return (-b / nn) * a;
}

StateVec clf_qp(const ClfConfig& cfg, const StateVec& f_at_z, const StateVec& f_at_zstar,
                const StateVec& e) {
  const Eigen::Index d = e.size();
  if (f_at_z.size() != d || f_at_zstar.size() != d || cfg.P.rows() != d)
    throw DimensionMismatch("clf_qp: dimension mismatch");
  if (!f_at_z.allFinite() || !f_at_zstar.allFinite() || !e.allFinite())
    throw Error("clf_qp: non-finite input");
  if (e.isZero(0.0)) return StateVec::Zero(d);
  const StateVec a = 2.0 * (cfg.P * e);
  const double b = a.dot(f_at_z - f_at_zstar) + cfg.c * e.dot(cfg.P * e);
  return min_norm_halfspace(a, b);
}

} // namespace l1ds
