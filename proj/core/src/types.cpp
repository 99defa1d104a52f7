#include "l1ds/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace l1ds {

void Trajectory::validate() const {
  if (times.size() != states.size())
    throw InvalidDemonstration("trajectory has " + std::to_string(times.size()) +
                               " timestamps but " + std::to_string(states.size()) + " states");
  if (!velocities.empty() && velocities.size() != states.size())
    throw InvalidDemonstration("trajectory velocity count does not match state count");
  if (states.empty()) return;
  const int d = dim();
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (static_cast<int>(states[i].size()) != d)
      throw DimensionMismatch("state " + std::to_string(i) + " has dimension " +
                              std::to_string(states[i].size()) + ", expected " + std::to_string(d));
    if (!states[i].allFinite())
      throw InvalidDemonstration("non-finite state at sample " + std::to_string(i));
    if (!std::isfinite(times[i]))
      throw InvalidDemonstration("non-finite timestamp at sample " + std::to_string(i));
    if (i > 0 && times[i] <= times[i - 1])
      throw InvalidDemonstration("timestamps not strictly increasing at sample " + std::to_string(i));
    if (!velocities.empty()) {
      if (static_cast<int>(velocities[i].size()) != d)
        throw DimensionMismatch("velocity " + std::to_string(i) + " has wrong dimension");
      if (!velocities[i].allFinite())
        throw InvalidDemonstration("non-finite velocity at sample " + std::to_string(i));
    }
  }
}

bool DomainBox::contains(const StateVec& z) const {
  if (z.size() != lower.size()) throw DimensionMismatch("DomainBox::contains dimension mismatch");
  return (z.array() >= lower.array()).all() && (z.array() <= upper.array()).all();
}

DomainBox DomainBox::inflated(double factor) const {
  DomainBox out;
  const StateVec c = center();
  const StateVec half = 0.5 * (upper - lower) * (1.0 + factor);
  out.lower = c - half;
  out.upper = c + half;
  return out;
}

DomainBox DomainBox::from_points(const std::vector<const Trajectory*>& trajs) {
  StateVec lo, hi;
  bool first = true;
  for (const Trajectory* t : trajs) {
    if (!t) continue;
    for (const StateVec& z : t->states) {
      if (first) {
        lo = z;
        hi = z;
        first = false;
      } else {
        if (z.size() != lo.size()) throw DimensionMismatch("DomainBox::from_points mixed dimensions");
        lo = lo.cwiseMin(z);
        hi = hi.cwiseMax(z);
      }
    }
  }
  if (first) throw InvalidDemonstration("DomainBox::from_points: no states given");
  // A demo set that is flat along one axis would yield a zero-width box;
  // keep a minimum half-width so containment checks stay meaningful.
  const double max_half = std::max(1e-3, 0.5 * (hi - lo).maxCoeff());
  for (int i = 0; i < lo.size(); ++i) {
    const double half = 0.5 * (hi[i] - lo[i]);
    const double need = std::max(1e-3, 0.05 * max_half);
    if (half < need) {
      const double mid = 0.5 * (hi[i] + lo[i]);
      lo[i] = mid - need;
      hi[i] = mid + need;
    }
  }
  return DomainBox{lo, hi};
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

} // namespace l1ds
