#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ptkr/config.hpp"
#include "ptkr/phase.hpp"

namespace ptkr {

struct RunSummary {
  std::vector<PointResult> results;
  std::vector<std::filesystem::path> files;  // in write order
  int failed_points = 0;
};

/// Evolves every grid point of `config`, then writes trajectories, marginal
/// snapshots, fits.json and (for sweeps) phase_diagram into output_dir.
/// Simulation errors land in the outputs; I/O errors throw.
RunSummary execute_run(const RunConfig& config);

/// Re-fits every trajectory_*.csv in `input_dir` (plus matching marginal
/// files) with the windows and thresholds of `config` and writes fits.json
/// and phase_diagram.csv into config.output_dir.
RunSummary execute_fit(const RunConfig& config, const std::filesystem::path& input_dir);

struct CheckResult {
  std::string name;
  bool passed = false;
  double deviation = 0.0;  // worst deviation seen
  double tolerance = 0.0;
};

/// Oracle-equivalence and property battery on a 16-mode lattice.
std::vector<CheckResult> self_check();

}  // namespace ptkr
