#ifndef L1DS_RBF_FIELD_HPP
#define L1DS_RBF_FIELD_HPP

#include "l1ds/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace l1ds {

/// Learned autonomous vector field f(z) built from Gaussian RBF features
/// plus an affine tail: features are
///   [exp(-|z - c_1|^2 / (2 b^2)), ..., exp(-|z - c_K|^2 / (2 b^2)), z_1..z_d, 1]
/// and f(z) = weights^T * features(z).
struct VectorFieldModel {
  std::vector<StateVec> centers;
  double bandwidth = 0.0;
  Eigen::MatrixXd weights;     // (K + d + 1) x d
  double jacobian_bound = 0.0; // upper bound on the spectral norm of df/dz
  DomainBox domain;            // training bounding box inflated by 10%

  int dim() const { return static_cast<int>(domain.lower.size()); }
  int num_centers() const { return static_cast<int>(centers.size()); }
};

/// Fits the field by ridge regression of demonstrated velocities on the RBF +
/// affine features. Demonstrations must be preprocessed (uniform grid,
/// velocities present). Centers come from seeded k-means on the pooled
/// demonstration states; jacobian_bound is estimated by probing the analytic
/// Jacobian norm on a 50-per-axis grid over `domain`, times a 1.2 safety
/// factor.
VectorFieldModel fit_rbf(const std::vector<Trajectory>& demos, int num_centers,
                         double bandwidth, double ridge, std::uint64_t seed = 0);

StateVec eval_field(const VectorFieldModel& model, const StateVec& z);

/// Analytic Jacobian df/dz (d x d).
Eigen::MatrixXd field_jacobian(const VectorFieldModel& model, const StateVec& z);

/// Mean squared velocity residual of the model on (preprocessed) demos.
double fit_residual(const VectorFieldModel& model, const std::vector<Trajectory>& demos);

void save_model_json(const VectorFieldModel& model, const std::string& path);
VectorFieldModel load_model_json(const std::string& path);

} // namespace l1ds

#endif
