#include "l1ds/batch.hpp"

#include "l1ds/integrate.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace l1ds {

namespace {

Eigen::VectorXd axis_pattern(double first, double second, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = (i % 2 == 0) ? first : second;
  return v;
}

std::vector<std::vector<SineComponent>> sine_axes(double base, double scale, int dim, double f1,
                                                  double f2) {
  // two components per axis; the second axis is phase shifted so the two
  // channels do not move in lockstep
  std::vector<std::vector<SineComponent>> axes;
  for (int i = 0; i < dim; ++i) {
    const double a = base * scale * (i % 2 == 0 ? 1.0 : 0.8);
    const double phase = (i % 2 == 0) ? 0.0 : 1.0471975511965976;
    axes.push_back({{a, f1, phase}, {0.5 * a, f2, phase}});
  }
  return axes;
}

} // namespace

std::string row_regime(const std::string& row) {
  if (row == "perfect_step") return "perfect";
  if (row == "m_multisine" || row == "u_constant" || row == "u_multisine" ||
      row == "m_multisine_u_pulses")
    return "imperfect";
  throw ConfigError("batch: unknown disturbance row \"" + row + "\"");
}

std::vector<DisturbanceSpec> row_disturbances(const std::string& row, double scale, int dim) {
  std::vector<DisturbanceSpec> out;
  if (row == "perfect_step") {
    DisturbanceSpec s;
    s.kind = DisturbanceKind::step;
    s.channel = Channel::task;
    s.amplitude = scale * axis_pattern(0.5, -0.3, dim);
    s.start = 0.25;
    out.push_back(std::move(s));
  } else if (row == "m_multisine") {
    // slow components: fast matched ripple is soaked up by the inner loop for
    // every controller alike, so only the low band separates them
    DisturbanceSpec s;
    s.kind = DisturbanceKind::multi_sine;
    s.channel = Channel::matched;
    s.sines = sine_axes(30.0, scale, dim, 0.1, 0.25);
    out.push_back(std::move(s));
  } else if (row == "u_constant") {
    DisturbanceSpec s;
    s.kind = DisturbanceKind::constant;
    s.channel = Channel::unmatched;
    s.amplitude = scale * axis_pattern(0.35, -0.25, dim);
    out.push_back(std::move(s));
  } else if (row == "u_multisine") {
    DisturbanceSpec s;
    s.kind = DisturbanceKind::multi_sine;
    s.channel = Channel::unmatched;
    s.sines = sine_axes(3.0, scale, dim, 3.0, 7.0);
    out.push_back(std::move(s));
  } else if (row == "m_multisine_u_pulses") {
    DisturbanceSpec m;
    m.kind = DisturbanceKind::multi_sine;
    m.channel = Channel::matched;
    m.sines = sine_axes(30.0, scale, dim, 0.1, 0.25);
    out.push_back(std::move(m));
    DisturbanceSpec u;
    u.kind = DisturbanceKind::pulse_train;
    u.channel = Channel::unmatched;
    u.amplitude = scale * axis_pattern(0.5, -0.4, dim);
    u.windows = {{0.3, 0.4}, {0.7, 0.8}};
    out.push_back(std::move(u));
  } else {
    throw ConfigError("batch: unknown disturbance row \"" + row + "\"");
  }
  for (auto& s : out) s.validate(dim);
  return out;
}

namespace {

struct Prefit {
  VectorFieldModel model;
  Trajectory target;
  StateVec z0;
  bool ok = false;
  std::string error;
};

struct Group {
  int shape_idx;
  int row_idx;
  int seed_idx;
  const Prefit* prefit;
};

RunSetup group_setup(const ExperimentConfig& cfg, const Prefit& pre,
                     const std::vector<DisturbanceSpec>& dist, const std::string& regime,
                     const std::string& controller) {
  RunSetup s;
  s.model = &pre.model;
  s.target = pre.target;
  s.z0 = pre.z0;
  s.n = cfg.n;
  s.disturbances = dist;
  s.pid = cfg.regime.pid;
  s.integral_clamp = cfg.regime.integral_clamp;
  s.bounds = pre.model.domain.inflated(4.0);
  s.selector.window_w = cfg.selector.window_w;
  s.selector.history_h = cfg.selector.history_h;
  s.selector.target_history = cfg.selector.target_history;
  if (controller == "nominal") {
    s.clf_enabled = false;
    s.selector.mode = SelectorMode::time_indexed; // no tracking layer to feed
  } else {
    s.clf_enabled = true;
    s.clf = ClfConfig::diagonal(
        cfg.clf.c, Eigen::Map<const Eigen::VectorXd>(
                       cfg.clf.p_diag.data(), static_cast<Eigen::Index>(cfg.clf.p_diag.size())));
    s.selector.mode = cfg.selector.mode;
    if (controller == "l1") {
      L1Config l1;
      l1.omega = cfg.l1.omega;
      l1.t_sample = cfg.l1.t_sample;
      l1.a_s_diag = Eigen::Map<const Eigen::VectorXd>(
          cfg.l1.a_s_diag.data(), static_cast<Eigen::Index>(cfg.l1.a_s_diag.size()));
      s.l1 = std::move(l1);
    }
  }
  (void)regime;
  return s;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

} // namespace

BatchResult run_batch(const ExperimentConfig& cfg, int jobs) {
  if (cfg.batch.shapes.empty() || cfg.batch.rows.empty() || cfg.batch.controllers.empty())
    throw ConfigError("batch: empty sweep matrix");
  for (const auto& r : cfg.batch.rows) row_regime(r); // validate early

  const int n_shapes = static_cast<int>(cfg.batch.shapes.size());
  const int n_rows = static_cast<int>(cfg.batch.rows.size());
  const int n_seeds = static_cast<int>(cfg.seeds.size());
  const int n_ctrl = static_cast<int>(cfg.batch.controllers.size());

  // one model + target rollout per (shape, seed), fitted serially so the
  // parallel phase touches prefits read-only
  std::vector<Prefit> prefits(static_cast<std::size_t>(n_shapes) * n_seeds);
  for (int si = 0; si < n_shapes; ++si) {
    for (int di = 0; di < n_seeds; ++di) {
      Prefit& pre = prefits[static_cast<std::size_t>(si) * n_seeds + di];
      try {
        ShapeParams params = cfg.shape.params;
        params.kind = shape_kind_from_string(cfg.batch.shapes[si]);
        auto demos = generate_demo_set(params, cfg.seeds[di]);
        for (Trajectory& demo : demos) demo = resample_demo(demo, cfg.n);
        pre.model = fit_rbf(demos, cfg.model.num_centers, cfg.model.bandwidth, cfg.model.ridge,
                            cfg.model.seed + cfg.seeds[di]);
        pre.z0 = mean_start(demos);
        const double dt = 1.0 / (cfg.n - 1);
        const DomainBox box = pre.model.domain.inflated(4.0);
        RolloutResult roll = rollout(pre.model, pre.z0, dt, cfg.n - 1, &box);
        if (roll.truncated) throw Error("target rollout left the model domain");
        pre.target = std::move(roll.trajectory);
        pre.ok = true;
      } catch (const std::exception& e) {
        pre.error = e.what();
      }
    }
  }

  std::vector<Group> groups;
  groups.reserve(static_cast<std::size_t>(n_shapes) * n_rows * n_seeds);
  for (int si = 0; si < n_shapes; ++si)
    for (int ri = 0; ri < n_rows; ++ri)
      for (int di = 0; di < n_seeds; ++di)
        groups.push_back(
            {si, ri, di, &prefits[static_cast<std::size_t>(si) * n_seeds + di]});

  std::vector<std::vector<BatchCellResult>> slots(groups.size());

  auto run_group = [&](std::size_t gi) {
    const Group& g = groups[gi];
    const std::string& shape = cfg.batch.shapes[g.shape_idx];
    const std::string& row = cfg.batch.rows[g.row_idx];
    const std::string regime = row_regime(row);
    const std::uint64_t seed = cfg.seeds[g.seed_idx];

    std::vector<BatchCellResult>& cells = slots[gi];
    cells.resize(n_ctrl);
    for (int ci = 0; ci < n_ctrl; ++ci) {
      cells[ci].shape = shape;
      cells[ci].regime = regime;
      cells[ci].disturbance = row;
      cells[ci].controller = cfg.batch.controllers[ci];
      cells[ci].seed = seed;
    }
    auto fail_all = [&](const std::string& msg) {
      for (auto& c : cells) {
        c.failed = true;
        c.error = msg;
      }
    };
    if (!g.prefit->ok) {
      fail_all("model: " + g.prefit->error);
      return;
    }

    const bool perfect = regime == "perfect";
    std::vector<DisturbanceSpec> dist;
    RunResult baseline;
    try {
      dist = row_disturbances(row, cfg.batch.amplitude_scale, g.prefit->model.dim());
      RunSetup base_setup = group_setup(cfg, *g.prefit, dist, regime, "nominal");
      baseline = perfect ? run_perfect(base_setup) : run_imperfect(base_setup);
    } catch (const std::exception& e) {
      fail_all(std::string("baseline: ") + e.what());
      return;
    }

    const DtwParams band{cfg.dtw.band};
    for (int ci = 0; ci < n_ctrl; ++ci) {
      BatchCellResult& cell = cells[ci];
      try {
        if (cell.controller == "nominal") {
          cell.dtw_raw = baseline.dtw_raw;
          cell.dtw_normalized = 1.0;
          cell.truncated = baseline.truncated;
        } else {
          RunSetup setup = group_setup(cfg, *g.prefit, dist, regime, cell.controller);
          RunResult run = perfect ? run_perfect(setup) : run_imperfect(setup);
          cell.dtw_raw = run.dtw_raw;
          cell.dtw_normalized = normalized_dtw(run, baseline, band);
          cell.truncated = run.truncated;
        }
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(groups.size())));
  if (workers <= 1) {
    for (std::size_t gi = 0; gi < groups.size(); ++gi) run_group(gi);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t gi = next.fetch_add(1);
          if (gi >= groups.size()) return;
          run_group(gi);
        }
      });
    for (auto& t : pool) t.join();
  }

  BatchResult out;
  for (std::size_t gi = 0; gi < groups.size(); ++gi)
    for (auto& cell : slots[gi]) {
      out.any_failed = out.any_failed || cell.failed;
      out.runs.push_back(std::move(cell));
    }

  // score table: mean and sample std of normalized scores across seeds,
  // then a pooled ALL row per (disturbance, controller) across shapes
  auto aggregate = [&](const std::string& shape_key, const std::string& row,
                       const std::string& controller) {
    std::vector<double> vals;
    for (const auto& r : out.runs) {
      if (r.failed || r.disturbance != row || r.controller != controller) continue;
      if (shape_key != "ALL" && r.shape != shape_key) continue;
      vals.push_back(r.dtw_normalized);
    }
    ScoreRow sr;
    sr.shape = shape_key;
    sr.regime = row_regime(row);
    sr.disturbance = row;
    sr.controller = controller;
    sr.count = static_cast<int>(vals.size());
    if (!vals.empty()) {
      double sum = 0.0;
      for (double v : vals) sum += v;
      sr.mean = sum / vals.size();
      if (vals.size() > 1) {
        double ss = 0.0;
        for (double v : vals) ss += (v - sr.mean) * (v - sr.mean);
        sr.stddev = std::sqrt(ss / (vals.size() - 1));
      }
    }
    return sr;
  };

  for (const auto& shape : cfg.batch.shapes)
    for (const auto& row : cfg.batch.rows)
      for (const auto& ctrl : cfg.batch.controllers) {
        ScoreRow sr = aggregate(shape, row, ctrl);
        if (sr.count > 0) out.table.push_back(std::move(sr));
      }
  for (const auto& row : cfg.batch.rows)
    for (const auto& ctrl : cfg.batch.controllers) {
      ScoreRow sr = aggregate("ALL", row, ctrl);
      if (sr.count > 0) out.table.push_back(std::move(sr));
    }
  return out;
}

std::string summary_csv(const std::vector<BatchCellResult>& runs) {
  std::ostringstream out;
  out << "shape,regime,disturbance,controller,seed,dtw_raw,dtw_normalized,truncated\n";
  for (const auto& r : runs) {
    if (r.failed) continue;
    out << r.shape << "," << r.regime << "," << r.disturbance << "," << r.controller << ","
        << r.seed << "," << format_double(r.dtw_raw) << "," << format_double(r.dtw_normalized)
        << "," << (r.truncated ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string score_table_csv(const std::vector<ScoreRow>& table) {
  std::ostringstream out;
  out << "shape,regime,disturbance,controller,mean,std,count\n";
  for (const auto& r : table)
    out << r.shape << "," << r.regime << "," << r.disturbance << "," << r.controller << ","
        << format_double(r.mean) << "," << format_double(r.stddev) << "," << r.count << "\n";
  return out.str();
}

std::string failures_csv(const std::vector<BatchCellResult>& runs) {
  std::ostringstream out;
  out << "shape,regime,disturbance,controller,seed,error\n";
  for (const auto& r : runs) {
    if (!r.failed) continue;
    out << r.shape << "," << r.regime << "," << r.disturbance << "," << r.controller << ","
        << r.seed << "," << csv_quote(r.error) << "\n";
  }
  return out.str();
}

} // namespace l1ds
