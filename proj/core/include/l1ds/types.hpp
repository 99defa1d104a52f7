#ifndef L1DS_TYPES_HPP
#define L1DS_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace l1ds {

using StateVec = Eigen::VectorXd;

/// Base class for all library errors. CLI maps these to exit code 2,
/// except ConfigError which maps to 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Demonstration file or set rejected during validation.
class InvalidDemonstration : public Error {
public:
  using Error::Error;
};

/// Two objects that must share a dimension do not.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Regression system could not be solved reliably.
class FitError : public Error {
public:
  using Error::Error;
};

/// Banded DTW has no admissible warp path for the given lengths.
class NoWarpPath : public Error {
public:
  using Error::Error;
};

/// Filter bandwidth coincides with the decay rate, making the
/// certificate expressions singular.
class SingularBandwidth : public Error {
public:
  using Error::Error;
};

/// Baseline score for normalization is too close to zero.
class DegenerateBaseline : public Error {
public:
  using Error::Error;
};

/// A time-stamped sequence of states, optionally with velocities.
///
/// Invariants enforced by validate(): strictly increasing times, all
/// states share one dimension, velocities (when present) match states
/// one for one.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVec> states;
  std::vector<StateVec> velocities; // empty when not provided

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
  int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
  bool has_velocities() const { return !velocities.empty(); }

  void validate() const;
};

/// Axis-aligned box, used as the validity domain of a learned field.
struct DomainBox {
  StateVec lower;
  StateVec upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const StateVec& z) const;
  /// Returns a copy grown about its center by `factor` per side
  /// (factor 0.1 inflates each half-width by 10 percent).
  DomainBox inflated(double factor) const;
  StateVec center() const { return 0.5 * (lower + upper); }

  static DomainBox from_points(const std::vector<const Trajectory*>& trajs);
};

/// Shortest decimal form that parses back to the same double; used for every
/// CSV number so repeated runs are byte-identical.
std::string format_double(double v);

} // namespace l1ds

#endif
