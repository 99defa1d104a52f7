#ifndef L1DS_DEMOS_HPP
#define L1DS_DEMOS_HPP

#include "l1ds/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace l1ds {

/// Reads a demonstration from a CSV file with header
/// `t,x1,...,xd[,v1,...,vd]`. Velocity columns are optional; when present
/// they are loaded into Trajectory::velocities.
Trajectory load_demo_csv(const std::string& path);

/// Writes a trajectory in the same CSV format (velocities included when present).
void save_demo_csv(const Trajectory& traj, const std::string& path);

/// Resamples a demonstration onto the uniform grid t in [0,1] with n samples.
/// States are linearly interpolated after normalizing the original time span
/// to [0,1]; velocities are recomputed by central finite differences on the
/// new grid (one-sided at the two endpoints).
Trajectory resample_demo(const Trajectory& demo, int n);

/// Componentwise mean of the first state of each demonstration.
StateVec mean_start(const std::vector<Trajectory>& demos);

enum class ShapeKind { line, sine, angle, circle };

ShapeKind shape_kind_from_string(const std::string& s);
std::string to_string(ShapeKind kind);

/// Parameters of the synthetic demonstration generator. All four shapes are
/// planar (d = 2) curves traced over one normalized duration:
///   line    straight segment (0,0) -> (1, amplitude)
///   sine    (s, amplitude * sin(2*pi*frequency*s))
///   angle   corner (0, amplitude) -> (0,0) -> (1,0), constant speed
///   circle  full loop of radius `amplitude` about (0.5, 0.5), periodic
struct ShapeParams {
  ShapeKind kind = ShapeKind::sine;
  double amplitude = 0.5;
  double frequency = 1.0;
  double noise = 0.0;          // per-sample Gaussian position noise
  int num_demos = 4;
  int samples_per_demo = 400;  // raw samples before resampling
};

/// Generates one demonstration. Each demo gets a small reproducible spatial
/// offset, nonuniform sample times, and a slightly jittered duration so the
/// set behaves like separate recordings of the same motion.
Trajectory generate_demo(const ShapeParams& params, std::uint64_t seed, int demo_index);

std::vector<Trajectory> generate_demo_set(const ShapeParams& params, std::uint64_t seed);

} // namespace l1ds

#endif
