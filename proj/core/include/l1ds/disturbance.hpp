#ifndef L1DS_DISTURBANCE_HPP
#define L1DS_DISTURBANCE_HPP

#include "l1ds/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace l1ds {

enum class DisturbanceKind { constant, step, pulse_train, multi_sine };
enum class Channel { task, matched, unmatched };

DisturbanceKind disturbance_kind_from_string(const std::string& s);
std::string to_string(DisturbanceKind k);
Channel channel_from_string(const std::string& s);
std::string to_string(Channel c);

struct SineComponent {
  double amp = 0.0;
  double freq = 0.0; // cycles per unit normalized time
  double phase = 0.0;
};

/// One scripted disturbance signal on normalized time t in [0,1], routed to
/// the task channel (sigma), the matched plant channel (d_m), or the
/// unmatched plant channel (d_um).
///
///   constant     amplitude
///   step         amplitude * 1[t >= start]
///   pulse_train  amplitude on each right-open window [start_j, stop_j)
///   multi_sine   per axis: sum_j amp_j sin(2 pi freq_j t + phase_j)
///
/// A task-channel spec may additionally carry a state-dependent linear term
/// state_gain * (z - anchor); that part is added by the simulator, not by
/// eval_disturbance.
struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::constant;
  Channel channel = Channel::task;
  Eigen::VectorXd amplitude;                      // constant/step/pulse_train
  double start = 0.0;                             // step
  std::vector<std::pair<double, double>> windows; // pulse_train
  std::vector<std::vector<SineComponent>> sines;  // multi_sine, [axis][component]
  double state_gain = 0.0;                        // task channel only
  std::vector<double> anchor;                     // empty = domain center

  int dim() const;
  void validate(int expected_dim) const;
};

/// Time-scripted part of the signal. Total on [0,1]; pulse windows are
/// right-open.
StateVec eval_disturbance(const DisturbanceSpec& spec, double t);

/// Sum of the scripted parts of all specs routed to `channel`.
StateVec eval_channel(const std::vector<DisturbanceSpec>& specs, Channel channel, double t,
                      int dim);

/// Largest scripted magnitude over a uniform probe grid on [0,1], for
/// resolving certificate bounds from the active disturbance set.
double scripted_max_norm(const std::vector<DisturbanceSpec>& specs, Channel channel, int dim,
                         int grid = 2001);

/// Sum of |state_gain| over task-channel specs (the uncertainty's Lipschitz
/// constant in z).
double total_state_gain(const std::vector<DisturbanceSpec>& specs);

} // namespace l1ds

#endif
