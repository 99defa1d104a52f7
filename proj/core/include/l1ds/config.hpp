#ifndef L1DS_CONFIG_HPP
#define L1DS_CONFIG_HPP

#include "l1ds/demos.hpp"
#include "l1ds/disturbance.hpp"
#include "l1ds/simulate.hpp"
#include "l1ds/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace l1ds {

/// Where demonstrations come from: the synthetic generator or a directory of
/// demo CSV files.
struct ShapeSource {
  std::string source = "synthetic"; // "synthetic" | "directory"
  ShapeParams params;
  std::string directory;
};

struct ModelConfig {
  int num_centers = 30;
  double bandwidth = 0.2;
  double ridge = 1e-6;
  std::uint64_t seed = 0;
  std::string path; // nonempty: load this model file instead of fitting
};

struct ClfSection {
  bool enabled = true;
  double c = 2.0;
  std::vector<double> p_diag{1.0, 1.0};
};

struct L1Section {
  bool enabled = true;
  double omega = 30.0;
  double t_sample = 1e-3;
  std::vector<double> a_s_diag{-10.0, -10.0};
};

struct SelectorSection {
  SelectorMode mode = SelectorMode::dtw;
  int window_w = 50;
  int history_h = 40;
  int target_history = 0; // 0 = history_h
};

struct DtwSection {
  std::optional<int> band; // absent = unbanded
};

/// Certificate inputs; every numeric field accepts the JSON string "auto"
/// (parsed as nullopt), which the certify command resolves from the rest of
/// the experiment: gains from the clf/l1 sections, disturbance bounds from
/// the disturbance specs, and the rate bounds from a calibration run.
struct CertificateSection {
  std::optional<double> delta_sigma;
  std::optional<double> l_sigma_z;
  std::optional<double> delta_f;
  std::optional<double> delta_nom;
  std::optional<double> delta_sigma_hat;
  std::optional<double> delta_b;
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  std::optional<double> lambda;
  std::optional<double> v0;
  std::optional<double> epsilon;
  std::optional<double> t1_minus_t0;
  std::optional<double> omega;
  std::optional<double> t_sample;
  int dim = 0;                  // 0 = take the clf dimension
  std::vector<double> a_s_diag; // empty = take l1.a_s_diag
};

struct RegimeSection {
  std::string kind = "perfect"; // "perfect" | "imperfect"
  std::vector<DisturbanceSpec> disturbances;
  PidGains pid;
  double integral_clamp = 0.0; // 0 = derive from disturbance amplitudes
  std::vector<std::pair<double, double>> hold_windows;
  std::vector<double> z0_offset; // empty = start on the target
};

/// The sweep matrix for cmd_batch: shapes x disturbance rows x controller
/// stacks, each repeated over the experiment seeds.
struct BatchSection {
  std::vector<std::string> shapes{"line", "sine", "angle", "circle"};
  std::vector<std::string> rows{"perfect_step", "m_multisine", "u_constant", "u_multisine",
                                "m_multisine_u_pulses"};
  std::vector<std::string> controllers{"nominal", "clf", "l1"};
  double amplitude_scale = 1.0;
};

/// One experiment, aggregating every module's knobs. Parsing is strict: an
/// unknown key anywhere fails with the offending key path named, and
/// parse(serialize(cfg)) reproduces cfg exactly.
struct ExperimentConfig {
  ShapeSource shape;
  int n = 1000; // outer grid points; dt = 1/(n-1)
  ModelConfig model;
  ClfSection clf;
  L1Section l1;
  SelectorSection selector;
  DtwSection dtw;
  CertificateSection certificate;
  RegimeSection regime;
  BatchSection batch;
  std::string output_dir = "out";
  std::vector<std::uint64_t> seeds{0};
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical form: every key emitted, "auto" for unresolved certificate
/// fields, alphabetical key order, shortest round-trip number formatting.
std::string serialize_config(const ExperimentConfig& cfg);

} // namespace l1ds

#endif
