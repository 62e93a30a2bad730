#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ptkr/config.hpp"
#include "ptkr/phase.hpp"
#include "ptkr/trajectory.hpp"

namespace ptkr::io {

/// Fixed-decimal parameter tag used in file names ("%.8f").
std::string parameter_tag(double value);

std::string trajectory_filename(double lambda, double epsilon, OutputFormat format);
std::string marginal_filename(double lambda, double epsilon, long kick, OutputFormat format);

/// Shortest text that reads back to the same double ("%.17g").
std::string format_double(double v);

void write_trajectory(const std::filesystem::path& path, const TrajectoryRecord& traj, OutputFormat format);
void write_marginal(const std::filesystem::path& path, const MarginalSnapshot& snap, OutputFormat format);
void write_phase_diagram(const std::filesystem::path& path, const std::vector<PhasePoint>& points,
                         OutputFormat format);

/// JSON document with every fit, the windows and the thresholds used.
std::string fits_json(const std::vector<PointResult>& results, const RunConfig& config);

/// Reads a trajectory CSV written by write_trajectory. lambda and epsilon
/// come from the file name when it follows trajectory_<lambda>_<epsilon>.csv.
TrajectoryRecord read_trajectory_csv(const std::filesystem::path& path);
MomentumDistribution read_marginal_csv(const std::filesystem::path& path);

/// (lambda, epsilon) parsed from a trajectory_ or marginal_ file name.
std::optional<std::pair<double, double>> parameters_from_filename(const std::string& name);

}  // namespace ptkr::io
