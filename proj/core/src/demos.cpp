#include "l1ds/demos.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace l1ds {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line_no) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  std::size_t end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos)
    throw InvalidDemonstration(path + ":" + std::to_string(line_no) + ": empty field");
  double v = 0.0;
  auto res = std::from_chars(s.data() + begin, s.data() + end + 1, v);
  if (res.ec != std::errc{} || res.ptr != s.data() + end + 1)
    throw InvalidDemonstration(path + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

} // namespace

Trajectory load_demo_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidDemonstration("cannot open demonstration file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw InvalidDemonstration(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header[0] != "t")
    throw InvalidDemonstration(path + ": header must start with 't'");
  int d = 0;
  std::size_t i = 1;
  while (i < header.size() && !header[i].empty() && header[i][0] == 'x') {
    ++d;
    ++i;
  }
  if (d == 0) throw InvalidDemonstration(path + ": header has no state columns x1..xd");
  bool has_vel = i < header.size();
  if (has_vel) {
    for (int k = 0; k < d; ++k, ++i) {
      if (i >= header.size() || header[i].empty() || header[i][0] != 'v')
        throw InvalidDemonstration(path + ": expected " + std::to_string(d) + " velocity columns");
    }
  }
  if (i != header.size()) throw InvalidDemonstration(path + ": trailing header columns");

  Trajectory traj;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    const std::size_t expected = 1 + static_cast<std::size_t>(has_vel ? 2 * d : d);
    if (fields.size() != expected)
      throw InvalidDemonstration(path + ":" + std::to_string(line_no) + ": expected " +
                                 std::to_string(expected) + " fields, got " +
                                 std::to_string(fields.size()));
    traj.times.push_back(parse_double(fields[0], path, line_no));
    StateVec z(d);
    for (int k = 0; k < d; ++k) z[k] = parse_double(fields[1 + k], path, line_no);
    traj.states.push_back(std::move(z));
    if (has_vel) {
      StateVec v(d);
      for (int k = 0; k < d; ++k) v[k] = parse_double(fields[1 + d + k], path, line_no);
      traj.velocities.push_back(std::move(v));
    }
  }
  if (traj.size() < 2)
    throw InvalidDemonstration(path + ": a demonstration needs at least 2 samples");
  traj.validate();
  return traj;
}

void save_demo_csv(const Trajectory& traj, const std::string& path) {
  traj.validate();
  std::ofstream out(path);
  if (!out) throw Error("cannot write demonstration file: " + path);
  const int d = traj.dim();
  out << "t";
  for (int k = 1; k <= d; ++k) out << ",x" << k;
  if (traj.has_velocities())
    for (int k = 1; k <= d; ++k) out << ",v" << k;
  out << "\n";
  char buf[64];
  auto put = [&](double v) {
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
  };
  for (std::size_t i = 0; i < traj.size(); ++i) {
    put(traj.times[i]);
    for (int k = 0; k < d; ++k) {
      out << ',';
      put(traj.states[i][k]);
    }
    if (traj.has_velocities()) {
      for (int k = 0; k < d; ++k) {
        out << ',';
        put(traj.velocities[i][k]);
      }
    }
    out << "\n";
  }
}

Trajectory resample_demo(const Trajectory& demo, int n) {
  if (demo.size() < 2)
    throw InvalidDemonstration("resample: a demonstration needs at least 2 samples");
  demo.validate();
  if (n < 2) throw ConfigError("resample: n must be at least 2");

  const double t0 = demo.times.front();
  const double span = demo.times.back() - t0;
  const int d = demo.dim();

  Trajectory out;
  out.times.resize(n);
  out.states.resize(n);
  out.velocities.resize(n);

  std::size_t seg = 0;
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    out.times[i] = u;
    const double t = t0 + u * span;
    while (seg + 2 < demo.size() && demo.times[seg + 1] < t) ++seg;
    const double ta = demo.times[seg];
    const double tb = demo.times[seg + 1];
    const double w = std::clamp((t - ta) / (tb - ta), 0.0, 1.0);
    out.states[i] = (1.0 - w) * demo.states[seg] + w * demo.states[seg + 1];
  }

  const double dt = 1.0 / (n - 1);
  out.velocities[0] = (out.states[1] - out.states[0]) / dt;
  for (int i = 1; i + 1 < n; ++i)
    out.velocities[i] = (out.states[i + 1] - out.states[i - 1]) / (2.0 * dt);
  out.velocities[n - 1] = (out.states[n - 1] - out.states[n - 2]) / dt;

  (void)d;
  return out;
}

StateVec mean_start(const std::vector<Trajectory>& demos) {
  if (demos.empty()) throw InvalidDemonstration("mean_start: empty demonstration list");
  const int d = demos.front().dim();
  StateVec sum = StateVec::Zero(d);
  for (const Trajectory& demo : demos) {
    if (demo.empty()) throw InvalidDemonstration("mean_start: empty demonstration");
    if (demo.dim() != d) throw DimensionMismatch("mean_start: mixed demonstration dimensions");
    sum += demo.states.front();
  }
  return sum / static_cast<double>(demos.size());
}

ShapeKind shape_kind_from_string(const std::string& s) {
  if (s == "line") return ShapeKind::line;
  if (s == "sine") return ShapeKind::sine;
  if (s == "angle") return ShapeKind::angle;
  if (s == "circle") return ShapeKind::circle;
  throw ConfigError("unknown shape '" + s + "' (expected line, sine, angle, or circle)");
}

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::line: return "line";
    case ShapeKind::sine: return "sine";
    case ShapeKind::angle: return "angle";
    case ShapeKind::circle: return "circle";
  }
  return "?";
}

namespace {

StateVec shape_point(const ShapeParams& p, double s) {
  StateVec z(2);
  switch (p.kind) {
    case ShapeKind::line:
      z << s, p.amplitude * s;
      break;
    case ShapeKind::sine:
      z << s, p.amplitude * std::sin(2.0 * std::numbers::pi * p.frequency * s);
      break;
    case ShapeKind::angle: {
      // Constant-speed corner: down the vertical leg, then along the horizontal.
      const double lv = p.amplitude;
      const double total = lv + 1.0;
      const double arc = s * total;
      if (arc <= lv)
        z << 0.0, p.amplitude - arc;
      else
        z << arc - lv, 0.0;
      break;
    }
    case ShapeKind::circle: {
      const double th = -0.5 * std::numbers::pi + 2.0 * std::numbers::pi * s;
      z << 0.5 + p.amplitude * std::cos(th), 0.5 + p.amplitude * std::sin(th);
      break;
    }
  }
  return z;
}

} // namespace

Trajectory generate_demo(const ShapeParams& params, std::uint64_t seed, int demo_index) {
  if (params.samples_per_demo < 2) throw ConfigError("samples_per_demo must be at least 2");
  if (params.amplitude <= 0) throw ConfigError("shape amplitude must be positive");
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(demo_index) + 1);
  std::uniform_real_distribution<double> gap(0.2, 1.8);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int m = params.samples_per_demo;
  const double duration = 1.0 + 0.1 * (2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng) - 1.0);

  std::vector<double> times(m);
  times[0] = 0.0;
  for (int i = 1; i < m; ++i) times[i] = times[i - 1] + gap(rng);
  const double scale = duration / times[m - 1];
  for (int i = 1; i < m; ++i) times[i] *= scale;

  StateVec offset(2);
  offset << 0.02 * gauss(rng), 0.02 * gauss(rng);

  Trajectory demo;
  demo.times = std::move(times);
  demo.states.resize(m);
  for (int i = 0; i < m; ++i) {
    const double s = demo.times[i] / duration;
    StateVec z = shape_point(params, s) + offset;
    if (params.noise > 0) {
      z[0] += params.noise * gauss(rng);
      z[1] += params.noise * gauss(rng);
    }
    demo.states[i] = std::move(z);
  }
  demo.validate();
  return demo;
}

std::vector<Trajectory> generate_demo_set(const ShapeParams& params, std::uint64_t seed) {
  if (params.num_demos < 1) throw ConfigError("num_demos must be at least 1");
  std::vector<Trajectory> demos;
  demos.reserve(params.num_demos);
  for (int i = 0; i < params.num_demos; ++i) demos.push_back(generate_demo(params, seed, i));
  return demos;
}

} // namespace l1ds
