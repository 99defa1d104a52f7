#include <l1ds/rbf_field.hpp>

#include <l1ds/demos.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

using namespace l1ds;

namespace {

std::vector<Trajectory> sine_demos(int n = 120) {
  ShapeParams p;
  p.kind = ShapeKind::sine;
  p.noise = 0.005;
  p.num_demos = 5;
  p.samples_per_demo = 150;
  std::vector<Trajectory> demos = generate_demo_set(p, 3);
  for (Trajectory& d : demos) d = resample_demo(d, n);
  return demos;
}

StateVec random_domain_point(std::mt19937_64& rng, const DomainBox& box) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  StateVec z(box.dim());
  for (int i = 0; i < box.dim(); ++i)
    z[i] = box.lower[i] + u(rng) * (box.upper[i] - box.lower[i]);
  return z;
}

} // namespace

TEST_CASE("fit reproduces demonstrated velocities closely") {
  const auto demos = sine_demos();
  const VectorFieldModel model = fit_rbf(demos, 30, 0.2, 1e-6, 0);
  CHECK(model.dim() == 2);
  CHECK(model.num_centers() == 30);
  // Demos revisit the same positions at jittered speeds, so the regression
  // targets disagree pointwise; ask for most of the velocity energy instead
  // of an absolute floor.
  double v2 = 0.0;
  std::size_t count = 0;
  for (const Trajectory& d : demos)
    for (const StateVec& v : d.velocities) {
      v2 += v.squaredNorm();
      ++count;
    }
  v2 /= static_cast<double>(count);
  const double res = fit_residual(model, demos);
  CHECK(res < 0.1 * v2);
  // along a single demo the typical prediction gap stays well under the
  // demo speed scale (about 2.5 here)
  const Trajectory& d0 = demos.front();
  std::vector<double> gaps;
  for (std::size_t i = 0; i < d0.size(); ++i)
    gaps.push_back((eval_field(model, d0.states[i]) - d0.velocities[i]).norm());
  std::sort(gaps.begin(), gaps.end());
  CHECK(gaps[gaps.size() / 2] < 0.8);
}

TEST_CASE("more centers never hurt the fit much and help overall") {
  const auto demos = sine_demos();
  const double r5 = fit_residual(fit_rbf(demos, 5, 0.2, 1e-6, 0), demos);
  const double r40 = fit_residual(fit_rbf(demos, 40, 0.2, 1e-6, 0), demos);
  CHECK(r40 < r5);
}

TEST_CASE("fitting is deterministic in the seed") {
  const auto demos = sine_demos();
  const VectorFieldModel a = fit_rbf(demos, 20, 0.2, 1e-6, 7);
  const VectorFieldModel b = fit_rbf(demos, 20, 0.2, 1e-6, 7);
  CHECK((a.weights - b.weights).norm() == 0.0);
  for (int k = 0; k < 20; ++k) CHECK((a.centers[k] - b.centers[k]).norm() == 0.0);
}

TEST_CASE("analytic jacobian matches finite differences") {
  const auto demos = sine_demos();
  const VectorFieldModel model = fit_rbf(demos, 25, 0.25, 1e-6, 1);
  std::mt19937_64 rng(13);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const StateVec z = random_domain_point(rng, model.domain);
    const Eigen::MatrixXd J = field_jacobian(model, z);
    for (int j = 0; j < 2; ++j) {
      StateVec zp = z, zm = z;
      zp[j] += h;
      zm[j] -= h;
      const StateVec col = (eval_field(model, zp) - eval_field(model, zm)) / (2.0 * h);
      CHECK((J.col(j) - col).norm() <= 1e-4 * (1.0 + col.norm()));
    }
  }
}

TEST_CASE("jacobian bound dominates the field jacobian across the domain") {
  const auto demos = sine_demos();
  const VectorFieldModel model = fit_rbf(demos, 25, 0.25, 1e-6, 2);
  CHECK(model.jacobian_bound > 0.0);
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 1000; ++trial) {
    const StateVec z = random_domain_point(rng, model.domain);
    const Eigen::MatrixXd J = field_jacobian(model, z);
    const double norm = J.jacobiSvd().singularValues()[0];
    CHECK(norm <= model.jacobian_bound);
  }
}

TEST_CASE("training domain covers the demonstrations with slack") {
  const auto demos = sine_demos();
  const VectorFieldModel model = fit_rbf(demos, 15, 0.2, 1e-6, 0);
  for (const auto& d : demos)
    for (const StateVec& z : d.states) CHECK(model.domain.contains(z));
}

TEST_CASE("model json round-trips exactly") {
  const auto demos = sine_demos();
  const VectorFieldModel model = fit_rbf(demos, 12, 0.3, 1e-5, 9);
  const std::string path =
      (std::filesystem::temp_directory_path() / "l1ds_model_roundtrip.json").string();
  save_model_json(model, path);
  const VectorFieldModel back = load_model_json(path);
  CHECK(back.bandwidth == model.bandwidth);
  CHECK(back.jacobian_bound == model.jacobian_bound);
  CHECK((back.weights - model.weights).norm() == 0.0);
  CHECK((back.domain.lower - model.domain.lower).norm() == 0.0);
  CHECK((back.domain.upper - model.domain.upper).norm() == 0.0);
  REQUIRE(back.num_centers() == model.num_centers());
  for (int k = 0; k < model.num_centers(); ++k)
    CHECK((back.centers[k] - model.centers[k]).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("fit validates its inputs") {
  const auto demos = sine_demos(60);
  CHECK_THROWS_AS(fit_rbf(demos, 0, 0.2, 1e-6), ConfigError);
  CHECK_THROWS_AS(fit_rbf(demos, 10, 0.0, 1e-6), ConfigError);
  CHECK_THROWS_AS(fit_rbf(demos, 10, 0.2, -1.0), ConfigError);
  CHECK_THROWS_AS(fit_rbf({}, 10, 0.2, 1e-6), InvalidDemonstration);
  std::vector<Trajectory> raw = {generate_demo({}, 0, 0)}; // no velocities
  CHECK_THROWS_AS(fit_rbf(raw, 10, 0.2, 1e-6), InvalidDemonstration);
}
