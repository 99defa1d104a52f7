#include "l1ds/commands.hpp"

#include "l1ds/batch.hpp"
#include "l1ds/demos.hpp"
#include "l1ds/dtw.hpp"
#include "l1ds/integrate.hpp"
#include "l1ds/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace l1ds {

namespace {

namespace fs = std::filesystem;

std::string resolve_out_dir(const ExperimentConfig& cfg, const CliOptions& opt) {
  return opt.out_dir.empty() ? cfg.output_dir : opt.out_dir;
}

std::uint64_t resolve_seed(const ExperimentConfig& cfg, const CliOptions& opt) {
  if (opt.seed) return *opt.seed;
  return cfg.seeds.front();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path);
}

/// 1 for configuration mistakes, 2 for domain failures.
int exit_code_for(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  return 2;
}

std::string controller_label(const ExperimentConfig& cfg) {
  if (cfg.l1.enabled) return "l1";
  if (cfg.clf.enabled) return "clf";
  return "nominal";
}

std::string disturbance_label(const ExperimentConfig& cfg) {
  if (cfg.regime.disturbances.empty()) return "none";
  std::string out;
  for (const auto& s : cfg.regime.disturbances) {
    if (!out.empty()) out += "+";
    out += to_string(s.kind);
  }
  return out;
}

std::string shape_label(const ExperimentConfig& cfg) {
  return cfg.shape.source == "synthetic" ? to_string(cfg.shape.params.kind) : "directory";
}

std::vector<Trajectory> resolve_demos(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.shape.source == "synthetic") return generate_demo_set(cfg.shape.params, seed);
  if (cfg.shape.directory.empty())
    throw ConfigError("shape.directory must be set when shape.source is \"directory\"");
  if (!fs::is_directory(cfg.shape.directory))
    throw InvalidDemonstration("demo directory not found: " + cfg.shape.directory);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(cfg.shape.directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw InvalidDemonstration("demo directory has no .csv files: " + cfg.shape.directory);
  std::vector<Trajectory> demos;
  demos.reserve(files.size());
  for (const auto& f : files) demos.push_back(load_demo_csv(f));
  return demos;
}

std::vector<Trajectory> preprocessed_demos(const ExperimentConfig& cfg, std::uint64_t seed) {
  std::vector<Trajectory> demos = resolve_demos(cfg, seed);
  for (Trajectory& demo : demos) demo = resample_demo(demo, cfg.n);
  return demos;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

/// Cheap config validation for --dry-run: exercises every section's own
/// validator without generating demos or fitting a model.
void validate_config(const ExperimentConfig& cfg) {
  const int d = static_cast<int>(cfg.clf.p_diag.size());
  if (d == 0) throw ConfigError("clf.p_diag must not be empty");
  if (cfg.clf.enabled)
    ClfConfig::diagonal(cfg.clf.c,
                        Eigen::Map<const Eigen::VectorXd>(cfg.clf.p_diag.data(),
                                                          static_cast<Eigen::Index>(d)))
        .validate(d);
  if (cfg.l1.enabled) {
    L1Config l1;
    l1.omega = cfg.l1.omega;
    l1.t_sample = cfg.l1.t_sample;
    l1.a_s_diag = Eigen::Map<const Eigen::VectorXd>(
        cfg.l1.a_s_diag.data(), static_cast<Eigen::Index>(cfg.l1.a_s_diag.size()));
    l1.validate(d, 1.0 / (cfg.n - 1));
  }
  for (const auto& spec : cfg.regime.disturbances) {
    spec.validate(d);
    if (cfg.regime.kind == "perfect" && spec.channel != Channel::task)
      throw ConfigError("regime: matched/unmatched disturbances need the imperfect regime");
    if (cfg.regime.kind == "imperfect" && spec.channel == Channel::task)
      throw ConfigError("regime: task-channel disturbances need the perfect regime");
  }
  if (!cfg.regime.z0_offset.empty() && static_cast<int>(cfg.regime.z0_offset.size()) != d)
    throw ConfigError("regime.z0_offset dimension mismatch");
  if (cfg.shape.source == "directory" && cfg.shape.directory.empty())
    throw ConfigError("shape.directory must be set when shape.source is \"directory\"");
  if (cfg.model.num_centers < 1) throw ConfigError("model.num_centers must be positive");
  if (cfg.model.bandwidth <= 0) throw ConfigError("model.bandwidth must be positive");
  if (cfg.model.ridge < 0) throw ConfigError("model.ridge must not be negative");
}

} // namespace

PreparedExperiment prepare_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
  PreparedExperiment pre;
  pre.demos = preprocessed_demos(cfg, seed);
  if (!cfg.model.path.empty())
    pre.model = load_model_json(cfg.model.path);
  else
    pre.model = fit_rbf(pre.demos, cfg.model.num_centers, cfg.model.bandwidth, cfg.model.ridge,
                        cfg.model.seed + seed);
  pre.bounds = pre.model.domain.inflated(4.0);
  StateVec start = mean_start(pre.demos);
  const double dt = 1.0 / (cfg.n - 1);
  RolloutResult roll = rollout(pre.model, start, dt, cfg.n - 1, &pre.bounds);
  if (roll.truncated) throw Error("target rollout left the model domain");
  pre.target = std::move(roll.trajectory);
  pre.z0 = start;
  if (!cfg.regime.z0_offset.empty()) {
    if (static_cast<int>(cfg.regime.z0_offset.size()) != pre.model.dim())
      throw DimensionMismatch("regime.z0_offset dimension mismatch");
    pre.z0 += Eigen::Map<const Eigen::VectorXd>(
        cfg.regime.z0_offset.data(), static_cast<Eigen::Index>(cfg.regime.z0_offset.size()));
  }
  return pre;
}

RunSetup configured_setup(const ExperimentConfig& cfg, const PreparedExperiment& pre) {
  RunSetup s;
  s.model = &pre.model;
  s.target = pre.target;
  s.z0 = pre.z0;
  s.n = cfg.n;
  s.disturbances = cfg.regime.disturbances;
  s.pid = cfg.regime.pid;
  s.integral_clamp = cfg.regime.integral_clamp;
  s.hold_windows = cfg.regime.hold_windows;
  s.bounds = pre.bounds;
  s.selector.mode = cfg.selector.mode;
  s.selector.window_w = cfg.selector.window_w;
  s.selector.history_h = cfg.selector.history_h;
  s.selector.target_history = cfg.selector.target_history;
  s.clf_enabled = cfg.clf.enabled;
  if (cfg.clf.enabled)
    s.clf = ClfConfig::diagonal(
        cfg.clf.c, Eigen::Map<const Eigen::VectorXd>(
                       cfg.clf.p_diag.data(), static_cast<Eigen::Index>(cfg.clf.p_diag.size())));
  if (cfg.l1.enabled) {
    L1Config l1;
    l1.omega = cfg.l1.omega;
    l1.t_sample = cfg.l1.t_sample;
    l1.a_s_diag = Eigen::Map<const Eigen::VectorXd>(
        cfg.l1.a_s_diag.data(), static_cast<Eigen::Index>(cfg.l1.a_s_diag.size()));
    s.l1 = std::move(l1);
  }
  return s;
}

RunResult execute_run(const ExperimentConfig& cfg, const PreparedExperiment& pre) {
  RunSetup s = configured_setup(cfg, pre);
  return cfg.regime.kind == "imperfect" ? run_imperfect(s) : run_perfect(s);
}

std::string trace_csv(const RunResult& run) {
  const int d = run.executed.empty() ? 0 : run.executed.dim();
  std::ostringstream out;
  out << "t";
  auto cols = [&](const char* prefix) {
    for (int i = 1; i <= d; ++i) out << "," << prefix << i;
  };
  cols("z");
  cols("zstar");
  cols("zref");
  out << ",k_sel";
  cols("unom");
  cols("ua");
  cols("sighat");
  cols("dm");
  cols("dum");
  out << "\n";
  auto vec = [&](const StateVec& v) {
    for (int i = 0; i < d; ++i) out << "," << format_double(v(i));
  };
  for (std::size_t k = 0; k < run.executed.size(); ++k) {
    out << format_double(run.executed.times[k]);
    vec(run.executed.states[k]);
    vec(run.zstar_trace[k]);
    vec(run.reference.states[k]);
    out << "," << run.selector_indices[k];
    vec(run.u_nom_trace[k]);
    vec(run.u_a_trace[k]);
    vec(run.sigma_hat_trace[k]);
    vec(run.dm_trace[k]);
    vec(run.dum_trace[k]);
    out << "\n";
  }
  return out.str();
}

CertificateInputs resolve_certificate(const ExperimentConfig& cfg, std::uint64_t seed) {
  const CertificateSection& c = cfg.certificate;
  CertificateInputs in;
  in.dim = c.dim > 0 ? c.dim : static_cast<int>(cfg.clf.p_diag.size());
  const std::vector<double>& as = c.a_s_diag.empty() ? cfg.l1.a_s_diag : c.a_s_diag;
  in.a_s_diag =
      Eigen::Map<const Eigen::VectorXd>(as.data(), static_cast<Eigen::Index>(as.size()));
  in.omega = c.omega.value_or(cfg.l1.omega);
  in.t_sample = c.t_sample.value_or(cfg.l1.t_sample);
  in.lambda = c.lambda.value_or(0.5 * cfg.clf.c);
  double pmin = cfg.clf.p_diag.empty() ? 1.0 : cfg.clf.p_diag.front();
  double pmax = pmin;
  for (double p : cfg.clf.p_diag) {
    pmin = std::min(pmin, p);
    pmax = std::max(pmax, p);
  }
  in.alpha1 = c.alpha1.value_or(pmin);
  in.alpha2 = c.alpha2.value_or(pmax);
  in.epsilon = c.epsilon.value_or(0.5);
  in.t1_minus_t0 = c.t1_minus_t0.value_or(0.3);

  if (c.v0) {
    in.v0 = *c.v0;
  } else {
    double v0 = 0.0;
    for (std::size_t i = 0; i < cfg.regime.z0_offset.size(); ++i) {
      const double p = i < cfg.clf.p_diag.size() ? cfg.clf.p_diag[i] : 1.0;
      v0 += p * cfg.regime.z0_offset[i] * cfg.regime.z0_offset[i];
    }
    in.v0 = v0;
  }

  const bool perfect = cfg.regime.kind == "perfect";
  if (c.delta_sigma) {
    in.delta_sigma = *c.delta_sigma;
  } else {
    if (!perfect)
      throw ConfigError(
          "certificate.delta_sigma: \"auto\" needs the perfect regime; give a number");
    in.delta_sigma = scripted_max_norm(cfg.regime.disturbances, Channel::task, in.dim);
  }
  in.l_sigma_z = c.l_sigma_z ? *c.l_sigma_z : total_state_gain(cfg.regime.disturbances);

  if (!c.delta_f || !c.delta_nom || !c.delta_sigma_hat) {
    // calibration run of the configured experiment; maxima along the
    // executed trace bound the certificate rates with a 1.2x margin
    if (!perfect)
      throw ConfigError(
          "certificate: \"auto\" rate bounds need the perfect regime; give numbers");
    PreparedExperiment pre = prepare_experiment(cfg, seed);
    RunResult run = execute_run(cfg, pre);
    double max_f = 0.0, max_nom = 0.0, max_sig = 0.0;
    for (std::size_t k = 0; k < run.executed.size(); ++k) {
      max_f = std::max(max_f, eval_field(pre.model, run.executed.states[k]).norm());
      max_nom = std::max(max_nom, run.u_nom_trace[k].norm());
      max_sig = std::max(max_sig, run.sigma_hat_trace[k].norm());
    }
    in.delta_f = c.delta_f.value_or(1.2 * max_f);
    in.delta_nom = c.delta_nom.value_or(1.2 * max_nom);
    in.delta_sigma_hat = c.delta_sigma_hat.value_or(1.2 * max_sig);
  } else {
    in.delta_f = *c.delta_f;
    in.delta_nom = *c.delta_nom;
    in.delta_sigma_hat = *c.delta_sigma_hat;
  }

  if (c.delta_b) {
    in.delta_b = *c.delta_b;
  } else {
    const double rho =
        std::sqrt(in.v0 / in.alpha1) * std::sqrt(in.alpha2 / in.alpha1) + in.epsilon;
    in.delta_b = 2.0 * in.alpha2 * rho;
  }
  return in;
}

int cmd_fit(const ExperimentConfig& cfg, const CliOptions& opt, std::ostream& out,
            std::ostream& err) {
  try {
    const std::uint64_t seed = resolve_seed(cfg, opt);
    if (opt.dry_run) {
      validate_config(cfg);
      out << "dry run: config ok\n";
      return 0;
    }
    std::vector<Trajectory> demos = preprocessed_demos(cfg, seed);
    VectorFieldModel model = fit_rbf(demos, cfg.model.num_centers, cfg.model.bandwidth,
                                     cfg.model.ridge, cfg.model.seed + seed);
    const double residual = fit_residual(model, demos);
    const std::string dir = resolve_out_dir(cfg, opt);
    fs::create_directories(dir);
    const std::string model_path = dir + "/model.json";
    save_model_json(model, model_path);
    std::ostringstream report;
    report << "{\n"
           << "  \"dim\": " << model.dim() << ",\n"
           << "  \"num_centers\": " << model.num_centers() << ",\n"
           << "  \"bandwidth\": " << format_double(model.bandwidth) << ",\n"
           << "  \"residual\": " << format_double(residual) << ",\n"
           << "  \"jacobian_bound\": " << format_double(model.jacobian_bound) << "\n"
           << "}\n";
    write_file(dir + "/fit_report.json", report.str());
    out << "fit: " << demos.size() << " demos, " << model.num_centers()
        << " centers, residual " << format_double(residual) << ", jacobian bound "
        << format_double(model.jacobian_bound) << "\n";
    out << "wrote " << model_path << " and " << dir << "/fit_report.json\n";
    return 0;
  } catch (const std::exception& e) {
    return exit_code_for(e, err);
  }
}

int cmd_run(const ExperimentConfig& cfg, const CliOptions& opt, std::ostream& out,
            std::ostream& err) {
  try {
    const std::uint64_t seed = resolve_seed(cfg, opt);
    if (opt.dry_run) {
      validate_config(cfg);
      out << "dry run: config ok\n";
      return 0;
    }
    PreparedExperiment pre = prepare_experiment(cfg, seed);
    RunResult run = execute_run(cfg, pre);

    ExperimentConfig base_cfg = cfg;
    base_cfg.clf.enabled = false;
    base_cfg.l1.enabled = false;
    base_cfg.selector.mode = SelectorMode::time_indexed;
    RunResult baseline = execute_run(base_cfg, pre);

    double normalized = std::numeric_limits<double>::quiet_NaN();
    try {
      normalized = normalized_dtw(run, baseline, DtwParams{cfg.dtw.band});
    } catch (const DegenerateBaseline&) {
      err << "note: baseline deviation is zero; normalized score undefined\n";
    }

    const std::string dir = resolve_out_dir(cfg, opt);
    fs::create_directories(dir);
    write_file(dir + "/trace.csv", trace_csv(run));
    write_run_svg(dir + "/run.svg", run, cfg.regime.disturbances, cfg.regime.hold_windows);
    BatchCellResult row;
    row.shape = shape_label(cfg);
    row.regime = cfg.regime.kind;
    row.disturbance = disturbance_label(cfg);
    row.controller = controller_label(cfg);
    row.seed = seed;
    row.dtw_raw = run.dtw_raw;
    row.dtw_normalized = normalized;
    row.truncated = run.truncated;
    write_file(dir + "/summary.csv", summary_csv({row}));
    out << "run: dtw_raw " << format_double(run.dtw_raw) << ", dtw_normalized "
        << format_double(normalized) << ", truncated " << (run.truncated ? 1 : 0) << "\n";
    out << "wrote " << dir << "/trace.csv, " << dir << "/run.svg, " << dir << "/summary.csv\n";
    if (run.truncated) {
      err << "error: run left the simulation domain and was truncated\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    return exit_code_for(e, err);
  }
}

int cmd_batch(const ExperimentConfig& cfg, const CliOptions& opt, std::ostream& out,
              std::ostream& err) {
  try {
    if (opt.dry_run) {
      for (const auto& r : cfg.batch.rows) row_regime(r);
      for (const auto& s : cfg.batch.shapes) shape_kind_from_string(s);
      out << "dry run: config ok, "
          << cfg.batch.shapes.size() * cfg.batch.rows.size() * cfg.batch.controllers.size() *
                 cfg.seeds.size()
          << " cells\n";
      return 0;
    }
    ExperimentConfig eff = cfg;
    if (opt.seed) eff.seeds = {*opt.seed};
    BatchResult res = run_batch(eff, std::max(1, opt.jobs));
    const std::string dir = resolve_out_dir(cfg, opt);
    fs::create_directories(dir);
    write_file(dir + "/scores.csv", score_table_csv(res.table));
    write_file(dir + "/summary.csv", summary_csv(res.runs));
    if (res.any_failed) write_file(dir + "/failures.csv", failures_csv(res.runs));
    out << score_table_csv(res.table);
    std::size_t failed = 0;
    for (const auto& r : res.runs)
      if (r.failed) ++failed;
    out << "batch: " << res.runs.size() << " cells, " << failed << " failed; wrote " << dir
        << "/scores.csv, " << dir << "/summary.csv\n";
    if (res.any_failed) {
      err << "error: " << failed << " cells failed; see " << dir << "/failures.csv\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    return exit_code_for(e, err);
  }
}

int cmd_certify(const ExperimentConfig& cfg, const CliOptions& opt, std::ostream& out,
                std::ostream& err) {
  try {
    const std::uint64_t seed = resolve_seed(cfg, opt);
    if (opt.dry_run) {
      validate_config(cfg);
      out << "dry run: config ok\n";
      return 0;
    }
    CertificateInputs in = resolve_certificate(cfg, seed);
    CertificateReport rep = certify(in);
    out << "phi1 = " << fmt6(rep.phi1) << "\n";
    out << "rho = " << fmt6(rep.rho) << "\n";
    out << "zeta1 = " << fmt6(rep.zeta1) << "\n";
    out << "zeta2 = " << fmt6(rep.zeta2) << "\n";
    out << "zeta3 = " << fmt6(rep.zeta3) << "\n";
    out << "zeta4 = " << fmt6(rep.zeta4) << "\n";
    out << "bandwidth_condition = " << (rep.condition_bandwidth_ok ? "PASS" : "FAIL")
        << " (alpha1 rho^2 = " << fmt6(in.alpha1 * rep.rho * rep.rho)
        << " vs v0 + delta_b zeta1 = " << fmt6(in.v0 + in.delta_b * rep.zeta1) << ")\n";
    out << "ts_max = " << fmt6(rep.ts_max) << "\n";
    out << "sampling_condition = " << (rep.condition_ts_ok ? "PASS" : "FAIL")
        << " (t_sample = " << fmt6(in.t_sample) << ")\n";
    out << "mu = " << fmt6(rep.ultimate_bound_mu) << "\n";
    if (rep.near_singular_warning)
      out << "warning: omega is within 10 percent of 2 lambda; the bounds blow up near "
             "that pole\n";
    if (!rep.condition_bandwidth_ok || !rep.condition_ts_ok) {
      err << "error: certificate conditions not satisfied\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    return exit_code_for(e, err);
  }
}

int cmd_dtw(const std::string& file_a, const std::string& file_b, std::optional<int> band,
            bool show_path, std::ostream& out, std::ostream& err) {
  try {
    const Trajectory a = load_demo_csv(file_a);
    const Trajectory b = load_demo_csv(file_b);
    if (a.dim() != b.dim())
      throw DimensionMismatch("dtw: " + file_a + " has dimension " + std::to_string(a.dim()) +
                              " but " + file_b + " has dimension " + std::to_string(b.dim()));
    DtwResult res = dtw_align(a.states, b.states, DtwParams{band});
    out << "dtw = " << format_double(res.distance) << "\n";
    if (show_path)
      for (const auto& [i, j] : res.path) out << i << " " << j << "\n";
    return 0;
  } catch (const std::exception& e) {
    return exit_code_for(e, err);
  }
}

int cmd_gen_demos(const ExperimentConfig& cfg, const CliOptions& opt, std::ostream& out,
                  std::ostream& err) {
  try {
    const std::uint64_t seed = resolve_seed(cfg, opt);
    if (opt.dry_run) {
      out << "dry run: config ok\n";
      return 0;
    }
    const std::vector<Trajectory> demos = generate_demo_set(cfg.shape.params, seed);
    const std::string dir = resolve_out_dir(cfg, opt);
    fs::create_directories(dir);
    for (std::size_t i = 0; i < demos.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "demo_%02zu.csv", i);
      save_demo_csv(demos[i], dir + "/" + name);
    }
    out << "wrote " << demos.size() << " " << to_string(cfg.shape.params.kind)
        << " demos to " << dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    return exit_code_for(e, err);
  }
}

} // namespace l1ds
