#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptkr/fitting.hpp"
#include "ptkr/floquet.hpp"

namespace ptkr {

/// Transport regimes in the (lambda, epsilon) plane.
enum class Phase {
  Undetermined = 0,
  Localized = 1,         // I: unbroken PT, <p1^2> saturates
  ChaoticDiffusion = 2,  // II: unbroken PT, <p1^2> grows linearly
  BallisticSoliton = 3,  // III: broken PT, directed current, constant width
  DirectedMbd = 4,       // IV: broken PT, directed current, width ~ eta t^alpha
};

std::string_view roman(Phase phase);

struct ClassifierThresholds {
  /// PT symmetry counts as broken when the time-averaged norm exceeds 1 + norm_margin.
  double norm_margin = 0.1;
  /// Unbroken points are diffusive when slope(<p1^2>) * window_length / mean(<p1^2>)
  /// on the fit window reaches this value.
  double diffusion_growth = 0.2;
  /// Broken points keep a constant width when M1(t_f) / M1(t_f / 2) stays below this.
  double width_ratio = 1.2;
};

/// Scalars the classifier looks at, extracted from one trajectory.
struct PointSummary {
  double lambda = 0.0;
  double epsilon = 0.0;
  TimeAverages averages;
  FitResults fit;
  double p1_sq_mean_on_window = 0.0;
  double diffusion_indicator = 0.0;
  double width_ratio = 1.0;
};

PointSummary summarize(const TrajectoryRecord& traj, FitWindow window);

struct PhasePoint {
  double lambda = 0.0;
  double epsilon = 0.0;
  Phase phase = Phase::Undetermined;
  bool pt_broken = false;
  double norm_time_avg = 1.0;
  double entropy_time_avg = 0.0;
  double plateau_level = 0.0;  // mean <p1^2> over the fit window
  double diffusion_indicator = 0.0;
  double width_ratio = 1.0;
  bool truncation_leak = false;
  FitResults fit;
  std::optional<std::string> error;
};

/// Throws InconsistentFits when a summary scalar the decision needs is not finite.
PhasePoint classify_phase(const PointSummary& summary, const ClassifierThresholds& thresholds = {});

struct AnalysisOptions {
  EvolveOptions evolve;
  double window_fraction = 0.5;
  std::optional<long> window_start;  // explicit bounds override window_fraction
  std::optional<long> window_end;
  ClassifierThresholds thresholds;
};

/// Fit window for `traj` under `options`, clamped to the trajectory.
FitWindow resolve_window(const TrajectoryRecord& traj, const AnalysisOptions& options);

struct PointResult {
  PhasePoint point;
  std::optional<TrajectoryRecord> trajectory;
};

/// evolve + fit_all + classify_phase for a single parameter set. Errors are
/// caught and stored in point.error.
PointResult analyze_point(const SimParams& params, const AnalysisOptions& options,
                          bool keep_trajectory = false);

struct GridPoint {
  double lambda = 0.0;
  double epsilon = 0.0;
};

/// Runs analyze_point for every grid cell on `workers` threads. Output is
/// sorted by (lambda, epsilon) and does not depend on the worker count.
std::vector<PointResult> sweep_phase_diagram(const std::vector<GridPoint>& grid, const SimParams& base,
                                             const AnalysisOptions& options, int workers = 1,
                                             bool keep_trajectories = false);

}  // namespace ptkr
