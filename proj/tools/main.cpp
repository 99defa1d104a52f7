#include "l1ds/commands.hpp"
#include "l1ds/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"task-level robust control of learned dynamical-system motion plans"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool dry_run = false;
  int jobs = 1;
  app.add_option("--config", config_path, "experiment config file (JSON)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "seed override");
  app.add_flag("--dry-run", dry_run, "validate the config and exit without writing");
  app.add_option("--jobs", jobs, "parallel batch workers")->check(CLI::PositiveNumber);

  auto* fit = app.add_subcommand("fit", "fit the vector field model and write it");
  auto* run = app.add_subcommand("run", "one closed-loop run: trace CSV and SVG plot");
  auto* batch = app.add_subcommand("batch", "sweep matrix with normalized score table");
  auto* certify = app.add_subcommand("certify", "evaluate the tube certificate");
  auto* dtw = app.add_subcommand("dtw", "DTW distance between two trajectory CSVs");
  auto* gen = app.add_subcommand("gen-demos", "write synthetic demonstration CSVs");

  std::string file_a, file_b;
  std::optional<int> band;
  int band_value = 0;
  bool show_path = false;
  dtw->add_option("file_a", file_a, "first trajectory CSV")->required();
  dtw->add_option("file_b", file_b, "second trajectory CSV")->required();
  auto* band_opt = dtw->add_option("--band", band_value, "warping band half-width");
  dtw->add_flag("--path", show_path, "print the warping path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (seed_opt->count() > 0) seed = seed_value;
  if (band_opt->count() > 0) band = band_value;

  l1ds::CliOptions opt;
  opt.out_dir = out_dir;
  opt.seed = seed;
  opt.dry_run = dry_run;
  opt.jobs = jobs;

  if (dtw->parsed()) return l1ds::cmd_dtw(file_a, file_b, band, show_path, std::cout, std::cerr);

  l1ds::ExperimentConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = l1ds::load_config(config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }

  if (fit->parsed()) return l1ds::cmd_fit(cfg, opt, std::cout, std::cerr);
  if (run->parsed()) return l1ds::cmd_run(cfg, opt, std::cout, std::cerr);
  if (batch->parsed()) return l1ds::cmd_batch(cfg, opt, std::cout, std::cerr);
  if (certify->parsed()) return l1ds::cmd_certify(cfg, opt, std::cout, std::cerr);
  if (gen->parsed()) return l1ds::cmd_gen_demos(cfg, opt, std::cout, std::cerr);
  return 1;
}
