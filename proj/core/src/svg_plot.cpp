#include "l1ds/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace l1ds {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;       // data range
  double px, py, pw, ph;       // pixel rect
  double mapx(double x) const { return px + (x - x0) / (x1 - x0) * pw; }
  double mapy(double y) const { return py + ph - (y - y0) / (y1 - y0) * ph; }
};

void polyline(std::ostringstream& svg, const Frame& fr, const Trajectory& traj,
              const char* color, double width, const char* dash) {
  if (traj.empty()) return;
  const bool planar = traj.dim() >= 2;
  svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"";
  if (dash) svg << " stroke-dasharray=\"" << dash << "\"";
  svg << " points=\"";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double x = planar ? traj.states[i](0) : traj.times[i];
    const double y = planar ? traj.states[i](1) : traj.states[i](0);
    svg << fmt(fr.mapx(x)) << "," << fmt(fr.mapy(y));
    if (i + 1 < traj.size()) svg << " ";
  }
  svg << "\"/>\n";
}

void grow(double& lo, double& hi, const Trajectory& traj, bool planar, bool second) {
  for (const auto& s : traj.states) {
    const double v = planar ? s(second ? 1 : 0) : (second ? s(0) : 0.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
}

std::vector<std::pair<double, double>> active_windows(const DisturbanceSpec& s) {
  switch (s.kind) {
    case DisturbanceKind::constant:
    case DisturbanceKind::multi_sine:
      return {{0.0, 1.0}};
    case DisturbanceKind::step:
      return {{s.start, 1.0}};
    case DisturbanceKind::pulse_train:
      return s.windows;
  }
  return {};
}

const char* channel_color(Channel c) {
  switch (c) {
    case Channel::task: return "#bc5090";
    case Channel::matched: return "#7a5195";
    case Channel::unmatched: return "#ef8354";
  }
  return "#888888";
}

} // namespace

std::string render_run_svg(const RunResult& run, const std::vector<DisturbanceSpec>& disturbances,
                           const std::vector<std::pair<double, double>>& hold_windows) {
  const int W = 760, H = 560;
  const double strip_h = 46.0;
  Frame fr;
  fr.px = 48.0;
  fr.py = 18.0;
  fr.pw = W - fr.px - 18.0;
  fr.ph = H - fr.py - strip_h - 58.0;

  const bool planar = !run.executed.empty() && run.executed.dim() >= 2;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const Trajectory* t : {&run.target, &run.reference, &run.executed}) {
    if (t->empty()) continue;
    if (planar) {
      grow(x0, x1, *t, true, false);
      grow(y0, y1, *t, true, true);
    } else {
      x0 = std::min(x0, t->times.front());
      x1 = std::max(x1, t->times.back());
      grow(y0, y1, *t, false, true);
    }
  }
  if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
  if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  const double mx = 0.05 * (x1 - x0), my = 0.05 * (y1 - y0);
  fr.x0 = x0 - mx;
  fr.x1 = x1 + mx;
  fr.y0 = y0 - my;
  fr.y1 = y1 + my;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << fmt(fr.px) << "\" y=\"" << fmt(fr.py) << "\" width=\"" << fmt(fr.pw)
      << "\" height=\"" << fmt(fr.ph) << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";

  polyline(svg, fr, run.target, "#9e9e9e", 1.6, "6,4");
  polyline(svg, fr, run.reference, "#2b6cb0", 1.2, nullptr);
  polyline(svg, fr, run.executed, "#c53030", 1.8, nullptr);

  // legend
  const double lx = fr.px + 10.0;
  double ly = fr.py + fr.ph + 16.0;
  struct { const char* color; const char* dash; const char* label; } entries[] = {
      {"#9e9e9e", "6,4", "target"}, {"#2b6cb0", nullptr, "reference"},
      {"#c53030", nullptr, "executed"}};
  double off = 0.0;
  for (const auto& e : entries) {
    svg << "<line x1=\"" << fmt(lx + off) << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << fmt(lx + off + 26.0) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << e.color
        << "\" stroke-width=\"2\"";
    if (e.dash) svg << " stroke-dasharray=\"" << e.dash << "\"";
    svg << "/>\n";
    svg << "<text x=\"" << fmt(lx + off + 32.0) << "\" y=\"" << fmt(ly + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">" << e.label
        << "</text>\n";
    off += 120.0;
  }

  // disturbance / hold activity strip on the normalized time axis
  const double sy = H - strip_h - 14.0;
  svg << "<rect x=\"" << fmt(fr.px) << "\" y=\"" << fmt(sy) << "\" width=\"" << fmt(fr.pw)
      << "\" height=\"" << fmt(strip_h) << "\" fill=\"#f6f6f6\" stroke=\"#cccccc\"/>\n";
  auto strip_rect = [&](double t0, double t1, const char* color, double frac0, double frac1) {
    t0 = std::clamp(t0, 0.0, 1.0);
    t1 = std::clamp(t1, 0.0, 1.0);
    if (t1 <= t0) return;
    svg << "<rect x=\"" << fmt(fr.px + t0 * fr.pw) << "\" y=\"" << fmt(sy + frac0 * strip_h)
        << "\" width=\"" << fmt((t1 - t0) * fr.pw) << "\" height=\""
        << fmt((frac1 - frac0) * strip_h) << "\" fill=\"" << color << "\" fill-opacity=\"0.45\"/>\n";
  };
  for (const auto& s : disturbances)
    for (const auto& w : active_windows(s))
      strip_rect(w.first, w.second, channel_color(s.channel), 0.0, 0.62);
  for (const auto& w : hold_windows) strip_rect(w.first, w.second, "#444444", 0.66, 1.0);
  svg << "<text x=\"" << fmt(fr.px) << "\" y=\"" << fmt(sy + strip_h + 14.0)
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#666666\">"
      << "disturbance windows (top band) and holds (bottom band), normalized time 0 to 1"
      << "</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

void write_run_svg(const std::string& path, const RunResult& run,
                   const std::vector<DisturbanceSpec>& disturbances,
                   const std::vector<std::pair<double, double>>& hold_windows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("plot: cannot write " + path);
  const std::string svg = render_run_svg(run, disturbances, hold_windows);
  out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
  if (!out) throw Error("plot: write failed for " + path);
}

} // namespace l1ds
