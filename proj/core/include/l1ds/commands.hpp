#ifndef L1DS_COMMANDS_HPP
#define L1DS_COMMANDS_HPP

#include "l1ds/certificate.hpp"
#include "l1ds/config.hpp"
#include "l1ds/rbf_field.hpp"
#include "l1ds/simulate.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace l1ds {

/// Resolved command-line options shared by every subcommand.
struct CliOptions {
  std::string out_dir;               // overrides cfg.output_dir when nonempty
  std::optional<std::uint64_t> seed; // overrides cfg.seeds when set
  bool dry_run = false;
  int jobs = 1;
};

/// Demos, fitted model, and target rollout for one experiment seed.
struct PreparedExperiment {
  std::vector<Trajectory> demos;
  VectorFieldModel model;
  Trajectory target;
  StateVec z0;     // run start: target start plus the configured offset
  DomainBox bounds; // truncation box: model domain with 5x half-widths
};

PreparedExperiment prepare_experiment(const ExperimentConfig& cfg, std::uint64_t seed);

/// RunSetup honoring the config's regime, stack flags, and selector mode.
RunSetup configured_setup(const ExperimentConfig& cfg, const PreparedExperiment& pre);

/// One closed-loop run of the configured experiment (perfect or imperfect
/// per the regime section).
RunResult execute_run(const ExperimentConfig& cfg, const PreparedExperiment& pre);

/// Per-step trace table:
/// t, z1..zd, zstar1..zstard, zref1..zrefd, k_sel, unom1..unomd, ua1..uad,
/// sighat1..sighatd, dm1..dmd, dum1..dumd.
std::string trace_csv(const RunResult& run);

/// Fills every "auto" certificate field from the experiment: gains from the
/// clf/l1 sections, disturbance bounds from the scripted specs, and the rate
/// bounds (delta_f, delta_nom, delta_sigma_hat) from a calibration run of
/// the configured experiment with a 1.2x margin.
CertificateInputs resolve_certificate(const ExperimentConfig& cfg, std::uint64_t seed);

// Subcommands. Results and reports go to `out`, diagnostics to `err`.
// Exit codes: 0 success; 1 config/usage error; 2 domain failure (failed fit,
// no warping path, failed certificate conditions, truncated run).
int cmd_fit(const ExperimentConfig& cfg, const CliOptions& opt, std::ostream& out,
            std::ostream& err);
int cmd_run(const ExperimentConfig& cfg, const CliOptions& opt, std::ostream& out,
            std::ostream& err);
int cmd_batch(const ExperimentConfig& cfg, const CliOptions& opt, std::ostream& out,
              std::ostream& err);
int cmd_certify(const ExperimentConfig& cfg, const CliOptions& opt, std::ostream& out,
                std::ostream& err);
int cmd_dtw(const std::string& file_a, const std::string& file_b, std::optional<int> band,
            bool show_path, std::ostream& out, std::ostream& err);
int cmd_gen_demos(const ExperimentConfig& cfg, const CliOptions& opt, std::ostream& out,
                  std::ostream& err);

} // namespace l1ds

#endif
