#include "l1ds/disturbance.hpp"

#include <cmath>
#include <numbers>

namespace l1ds {

DisturbanceKind disturbance_kind_from_string(const std::string& s) {
  if (s == "constant") return DisturbanceKind::constant;
  if (s == "step") return DisturbanceKind::step;
  if (s == "pulse_train") return DisturbanceKind::pulse_train;
  if (s == "multi_sine") return DisturbanceKind::multi_sine;
  throw ConfigError("unknown disturbance kind '" + s +
                    "' (expected constant, step, pulse_train, or multi_sine)");
}

std::string to_string(DisturbanceKind k) {
  switch (k) {
    case DisturbanceKind::constant: return "constant";
    case DisturbanceKind::step: return "step";
    case DisturbanceKind::pulse_train: return "pulse_train";
    case DisturbanceKind::multi_sine: return "multi_sine";
  }
  return "?";
}

Channel channel_from_string(const std::string& s) {
  if (s == "task") return Channel::task;
  if (s == "matched") return Channel::matched;
  if (s == "unmatched") return Channel::unmatched;
  throw ConfigError("unknown disturbance channel '" + s +
                    "' (expected task, matched, or unmatched)");
}

std::string to_string(Channel c) {
  switch (c) {
    case Channel::task: return "task";
    case Channel::matched: return "matched";
    case Channel::unmatched: return "unmatched";
  }
  return "?";
}

int DisturbanceSpec::dim() const {
  if (kind == DisturbanceKind::multi_sine) return static_cast<int>(sines.size());
  return static_cast<int>(amplitude.size());
}

void DisturbanceSpec::validate(int expected_dim) const {
  if (dim() != expected_dim)
    throw ConfigError("disturbance has dimension " + std::to_string(dim()) + ", expected " +
                      std::to_string(expected_dim));
  switch (kind) {
    case DisturbanceKind::constant:
      break;
    case DisturbanceKind::step:
      if (start < 0.0 || start > 1.0)
        throw ConfigError("step disturbance start must lie in [0,1]");
      break;
    case DisturbanceKind::pulse_train:
      for (const auto& [s, e] : windows)
        if (!(0.0 <= s && s < e && e <= 1.0))
          throw ConfigError("pulse window must satisfy 0 <= start < stop <= 1");
      break;
    case DisturbanceKind::multi_sine:
      break;
  }
  if (state_gain != 0.0 && channel != Channel::task)
    throw ConfigError("state_gain is only supported on the task channel");
  if (!anchor.empty() && static_cast<int>(anchor.size()) != expected_dim)
    throw ConfigError("disturbance anchor has wrong dimension");
}

StateVec eval_disturbance(const DisturbanceSpec& spec, double t) {
  switch (spec.kind) {
    case DisturbanceKind::constant:
      return spec.amplitude;
    case DisturbanceKind::step:
      return t >= spec.start ? spec.amplitude : StateVec::Zero(spec.amplitude.size()).eval();
    case DisturbanceKind::pulse_train: {
      for (const auto& [s, e] : spec.windows)
        if (t >= s && t < e) return spec.amplitude;
      return StateVec::Zero(spec.amplitude.size());
    }
    case DisturbanceKind::multi_sine: {
      StateVec out = StateVec::Zero(spec.sines.size());
      for (std::size_t axis = 0; axis < spec.sines.size(); ++axis)
        for (const SineComponent& c : spec.sines[axis])
          out[axis] += c.amp * std::sin(2.0 * std::numbers::pi * c.freq * t + c.phase);
      return out;
    }
  }
  throw Error("eval_disturbance: unreachable");
}

StateVec eval_channel(const std::vector<DisturbanceSpec>& specs, Channel channel, double t,
                      int dim) {
  StateVec out = StateVec::Zero(dim);
  for (const DisturbanceSpec& s : specs)
    if (s.channel == channel) out += eval_disturbance(s, t);
  return out;
}

double scripted_max_norm(const std::vector<DisturbanceSpec>& specs, Channel channel, int dim,
                         int grid) {
  double best = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = static_cast<double>(i) / (grid - 1);
    best = std::max(best, eval_channel(specs, channel, t, dim).norm());
  }
  return best;
}

double total_state_gain(const std::vector<DisturbanceSpec>& specs) {
  double g = 0.0;
  for (const DisturbanceSpec& s : specs)
    if (s.channel == Channel::task) g += std::abs(s.state_gain);
  return g;
}

} // namespace l1ds
