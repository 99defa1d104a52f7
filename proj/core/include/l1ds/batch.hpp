#ifndef L1DS_BATCH_HPP
#define L1DS_BATCH_HPP

#include "l1ds/config.hpp"
#include "l1ds/simulate.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace l1ds {

/// Disturbance presets for the five sweep rows, spanning both regimes:
///   perfect_step          perfect,   task-channel step
///   m_multisine           imperfect, matched multi-sine
///   u_constant            imperfect, unmatched constant
///   u_multisine           imperfect, unmatched multi-sine
///   m_multisine_u_pulses  imperfect, matched multi-sine plus unmatched pulses
/// `scale` multiplies every amplitude.
std::vector<DisturbanceSpec> row_disturbances(const std::string& row, double scale, int dim);

/// "perfect" or "imperfect" for a preset row name; throws ConfigError on an
/// unknown row.
std::string row_regime(const std::string& row);

struct BatchCellResult {
  std::string shape;
  std::string regime;
  std::string disturbance; // preset row name
  std::string controller;  // nominal | clf | l1
  std::uint64_t seed = 0;
  double dtw_raw = 0.0;
  double dtw_normalized = 0.0;
  bool truncated = false;
  bool failed = false;
  std::string error;
};

struct ScoreRow {
  std::string shape; // one shape, or "ALL" for the pool across shapes
  std::string regime;
  std::string disturbance;
  std::string controller;
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

struct BatchResult {
  std::vector<BatchCellResult> runs; // deterministic matrix order
  std::vector<ScoreRow> table;       // per-shape rows first, then the ALL pool
  bool any_failed = false;
};

/// Runs the full sweep matrix from cfg.batch over cfg.seeds. Each
/// (shape, row, seed) group fits one model, rolls out one target, runs the
/// nominal baseline plus the requested controller stacks, and normalizes by
/// the baseline score. Groups execute in parallel on up to `jobs` threads;
/// cell failures are recorded per-row and the sweep continues.
BatchResult run_batch(const ExperimentConfig& cfg, int jobs);

/// CSV renderings; doubles use shortest round-trip formatting so identical
/// sweeps are byte-identical.
std::string summary_csv(const std::vector<BatchCellResult>& runs);
std::string score_table_csv(const std::vector<ScoreRow>& table);
std::string failures_csv(const std::vector<BatchCellResult>& runs);

} // namespace l1ds

#endif
