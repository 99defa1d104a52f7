#include "l1ds/rbf_field.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>

namespace l1ds {

namespace {

Eigen::MatrixXd pool_states(const std::vector<Trajectory>& demos, int& dim) {
  std::size_t total = 0;
  for (const Trajectory& d : demos) total += d.size();
  if (total == 0) throw InvalidDemonstration("fit_rbf: no samples");
  dim = demos.front().dim();
  Eigen::MatrixXd X(total, dim);
  std::size_t row = 0;
  for (const Trajectory& d : demos) {
    if (d.dim() != dim) throw DimensionMismatch("fit_rbf: mixed demonstration dimensions");
    for (const StateVec& z : d.states) X.row(row++) = z.transpose();
  }
  return X;
}

/// Seeded k-means++ initialization followed by Lloyd iterations. Empty
/// clusters are reseeded with the point farthest from its assigned center,
/// keeping the procedure deterministic.
std::vector<StateVec> kmeans_centers(const Eigen::MatrixXd& X, int k, std::uint64_t seed) {
  const int m = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  std::mt19937_64 rng(seed);

  Eigen::MatrixXd centers(k, d);
  std::vector<double> dist2(m, std::numeric_limits<double>::infinity());
  {
    std::uniform_int_distribution<int> pick(0, m - 1);
    centers.row(0) = X.row(pick(rng));
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (int i = 0; i < m; ++i) {
        const double d2 = (X.row(i) - centers.row(c - 1)).squaredNorm();
        dist2[i] = std::min(dist2[i], d2);
        total += dist2[i];
      }
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      int chosen = m - 1;
      for (int i = 0; i < m; ++i) {
        r -= dist2[i];
        if (r <= 0.0) {
          chosen = i;
          break;
        }
      }
      centers.row(c) = X.row(chosen);
    }
  }

  std::vector<int> assign(m, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int i = 0; i < m; ++i) {
      int best = 0;
      double best_d = (X.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d2 = (X.row(i) - centers.row(c)).squaredNorm();
        if (d2 < best_d) {
          best_d = d2;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < m; ++i) {
      sums.row(assign[i]) += X.row(i);
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / counts[c];
      } else {
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < m; ++i) {
          const double d2 = (X.row(i) - centers.row(assign[i])).squaredNorm();
          if (d2 > far_d) {
            far_d = d2;
            far = i;
          }
        }
        centers.row(c) = X.row(far);
        assign[far] = c;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
  }

  std::vector<StateVec> out(k);
  for (int c = 0; c < k; ++c) out[c] = centers.row(c).transpose();
  return out;
}

Eigen::VectorXd features(const VectorFieldModel& model, const StateVec& z) {
  const int k = model.num_centers();
  const int d = static_cast<int>(z.size());
  Eigen::VectorXd phi(k + d + 1);
  const double inv = 1.0 / (2.0 * model.bandwidth * model.bandwidth);
  for (int c = 0; c < k; ++c) phi[c] = std::exp(-(z - model.centers[c]).squaredNorm() * inv);
  phi.segment(k, d) = z;
  phi[k + d] = 1.0;
  return phi;
}

} // namespace

VectorFieldModel fit_rbf(const std::vector<Trajectory>& demos, int num_centers,
                         double bandwidth, double ridge, std::uint64_t seed) {
  if (demos.empty()) throw InvalidDemonstration("fit_rbf: no demonstrations");
  if (bandwidth <= 0) throw ConfigError("fit_rbf: bandwidth must be positive");
  if (ridge < 0) throw ConfigError("fit_rbf: ridge must be nonnegative");
  for (const Trajectory& d : demos) {
    if (!d.has_velocities())
      throw InvalidDemonstration("fit_rbf: demonstrations must be preprocessed (velocities present)");
    d.validate();
  }

  int dim = 0;
  const Eigen::MatrixXd X = pool_states(demos, dim);
  const int m = static_cast<int>(X.rows());
  if (num_centers < 1 || num_centers > m)
    throw ConfigError("fit_rbf: num_centers must be in [1, total sample count]");

  Eigen::MatrixXd Y(m, dim);
  {
    std::size_t row = 0;
    for (const Trajectory& d : demos)
      for (const StateVec& v : d.velocities) Y.row(row++) = v.transpose();
  }

  VectorFieldModel model;
  model.bandwidth = bandwidth;
  model.centers = kmeans_centers(X, num_centers, seed);
  {
    std::vector<const Trajectory*> ptrs;
    for (const Trajectory& d : demos) ptrs.push_back(&d);
    model.domain = DomainBox::from_points(ptrs).inflated(0.1);
  }

  const int p = num_centers + dim + 1;
  Eigen::MatrixXd Phi(m, p);
  for (int i = 0; i < m; ++i) Phi.row(i) = features(model, X.row(i).transpose()).transpose();

  Eigen::MatrixXd gram = Phi.transpose() * Phi;
  gram.diagonal().array() += ridge;
  const Eigen::MatrixXd rhs = Phi.transpose() * Y;
  if (ridge == 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible())
      throw FitError("fit_rbf: singular normal equations; use a positive ridge parameter");
    model.weights = lu.solve(rhs);
  } else {
    model.weights = gram.ldlt().solve(rhs);
  }
  if (!model.weights.allFinite())
    throw FitError("fit_rbf: regression produced non-finite weights; increase ridge");

  // Probe the analytic Jacobian norm on a regular grid over the inflated
  // training box and keep a 1.2 safety margin above the observed maximum.
  const int per_axis = 50;
  double max_norm = 0.0;
  std::vector<int> idx(dim, 0);
  StateVec probe(dim);
  const StateVec lo = model.domain.lower;
  const StateVec span = model.domain.upper - model.domain.lower;
  while (true) {
    for (int a = 0; a < dim; ++a) probe[a] = lo[a] + span[a] * idx[a] / (per_axis - 1);
    const Eigen::MatrixXd J = field_jacobian(model, probe);
    const double n = J.jacobiSvd().singularValues()[0];
    max_norm = std::max(max_norm, n);
    int a = 0;
    while (a < dim && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == dim) break;
  }
  model.jacobian_bound = 1.2 * max_norm;
  return model;
}

StateVec eval_field(const VectorFieldModel& model, const StateVec& z) {
  if (static_cast<int>(z.size()) != model.dim())
    throw DimensionMismatch("eval_field: state dimension mismatch");
  return model.weights.transpose() * features(model, z);
}

Eigen::MatrixXd field_jacobian(const VectorFieldModel& model, const StateVec& z) {
  if (static_cast<int>(z.size()) != model.dim())
    throw DimensionMismatch("field_jacobian: state dimension mismatch");
  const int k = model.num_centers();
  const int d = static_cast<int>(z.size());
  const double inv = 1.0 / (model.bandwidth * model.bandwidth);
  // d(phi_c)/dz = -phi_c * (z - c) / b^2; the affine block contributes its
  // weight rows directly.
  Eigen::MatrixXd J = model.weights.block(k, 0, d, d).transpose();
  const double inv2 = 0.5 * inv;
  for (int c = 0; c < k; ++c) {
    const StateVec diff = z - model.centers[c];
    const double phi = std::exp(-diff.squaredNorm() * inv2);
    J.noalias() -= (phi * inv) * model.weights.row(c).transpose() * diff.transpose();
  }
  return J;
}

double fit_residual(const VectorFieldModel& model, const std::vector<Trajectory>& demos) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const Trajectory& d : demos) {
    if (!d.has_velocities()) throw InvalidDemonstration("fit_residual: velocities missing");
    for (std::size_t i = 0; i < d.size(); ++i) {
      sum += (d.velocities[i] - eval_field(model, d.states[i])).squaredNorm();
      ++count;
    }
  }
  if (count == 0) throw InvalidDemonstration("fit_residual: no samples");
  return sum / static_cast<double>(count);
}

void save_model_json(const VectorFieldModel& model, const std::string& path) {
  nlohmann::json j;
  j["dim"] = model.dim();
  j["bandwidth"] = model.bandwidth;
  j["jacobian_bound"] = model.jacobian_bound;
  j["centers"] = nlohmann::json::array();
  for (const StateVec& c : model.centers)
    j["centers"].push_back(std::vector<double>(c.data(), c.data() + c.size()));
  j["weights"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r) {
    std::vector<double> row(model.weights.cols());
    for (Eigen::Index c = 0; c < model.weights.cols(); ++c) row[c] = model.weights(r, c);
    j["weights"].push_back(row);
  }
  j["domain"] = {
      {"lower", std::vector<double>(model.domain.lower.data(),
                                    model.domain.lower.data() + model.domain.lower.size())},
      {"upper", std::vector<double>(model.domain.upper.data(),
                                    model.domain.upper.data() + model.domain.upper.size())}};
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path);
  out << j.dump(2) << "\n";
}

VectorFieldModel load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("model file " + path + " is not valid JSON: " + e.what());
  }
  VectorFieldModel model;
  try {
    const int d = j.at("dim").get<int>();
    model.bandwidth = j.at("bandwidth").get<double>();
    model.jacobian_bound = j.at("jacobian_bound").get<double>();
    for (const auto& c : j.at("centers")) {
      const auto v = c.get<std::vector<double>>();
      model.centers.push_back(Eigen::Map<const StateVec>(v.data(), v.size()));
    }
    const auto& w = j.at("weights");
    model.weights.resize(w.size(), d);
    for (std::size_t r = 0; r < w.size(); ++r) {
      const auto row = w[r].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != d) throw Error("model weights have wrong width");
      for (int c = 0; c < d; ++c) model.weights(r, c) = row[c];
    }
    const auto lo = j.at("domain").at("lower").get<std::vector<double>>();
    const auto hi = j.at("domain").at("upper").get<std::vector<double>>();
    model.domain.lower = Eigen::Map<const StateVec>(lo.data(), lo.size());
    model.domain.upper = Eigen::Map<const StateVec>(hi.data(), hi.size());
    if (static_cast<int>(model.weights.rows()) != model.num_centers() + d + 1)
      throw Error("model weights have wrong height");
  } catch (const nlohmann::json::exception& e) {
    throw Error("model file " + path + " is malformed: " + e.what());
  }
  return model;
}

} // namespace l1ds
