#ifndef L1DS_SVG_PLOT_HPP
#define L1DS_SVG_PLOT_HPP

#include "l1ds/disturbance.hpp"
#include "l1ds/simulate.hpp"

#include <string>
#include <utility>
#include <vector>

namespace l1ds {

/// Static SVG with a state-space overlay of the target, reference, and
/// executed trajectories (first two axes; 1-d states are drawn against
/// time) and a bottom strip shading the time windows where scripted
/// disturbances and holds are active. No external assets; always well-formed
/// XML and far below 2 MB for the grid sizes used here.
std::string render_run_svg(const RunResult& run, const std::vector<DisturbanceSpec>& disturbances,
                           const std::vector<std::pair<double, double>>& hold_windows = {});

void write_run_svg(const std::string& path, const RunResult& run,
                   const std::vector<DisturbanceSpec>& disturbances,
                   const std::vector<std::pair<double, double>>& hold_windows = {});

} // namespace l1ds

#endif
