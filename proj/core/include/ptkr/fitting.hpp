#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ptkr/observables.hpp"
#include "ptkr/trajectory.hpp"

namespace ptkr {

/// Inclusive range of kick indices.
struct FitWindow {
  long t_start = 0;
  long t_end = 0;
};

/// Last `fraction` of the trajectory, ending at the final kick.
FitWindow default_window(const TrajectoryRecord& traj, double fraction = 0.5);

/// Ordinary least squares y = intercept + slope x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t samples = 0;
};

/// Throws WindowTooShort for fewer than two points or a degenerate x range.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kMinWindowSamples = 10;

struct CurrentFit {
  double rate = 0.0;           // D from regression of <p1> on t
  double endpoint_rate = 0.0;  // <p1(t_f)> / t_f
  double intercept = 0.0;
  double r_squared = 0.0;
  FitWindow window;
};

/// <p1>(t) = D t on the window.
CurrentFit fit_current_rate(const TrajectoryRecord& traj, FitWindow window);

struct PowerLawFit {
  double prefactor = 0.0;           // eta = exp(intercept of ln M1 vs ln t)
  double exponent = 0.0;            // alpha
  double endpoint_prefactor = 0.0;  // M1(t_f) / t_f^alpha
  double r_squared = 0.0;
  FitWindow window;
};

/// M1(t) = eta t^alpha by regression of ln M1 on ln t. The t = 0 sample is
/// skipped; any M1 <= 0 on the window throws NonpositiveWidth.
PowerLawFit fit_power_law_width(const TrajectoryRecord& traj, FitWindow window);

struct GrowthFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  FitWindow window;
};

/// gamma_norm from ln N(t) = c + gamma t.
GrowthFit fit_norm_growth(const TrajectoryRecord& traj, FitWindow window);

/// gamma_diff from <p1^2>(t) = c + gamma t.
GrowthFit fit_diffusion_rate(const TrajectoryRecord& traj, FitWindow window);

struct GaussianFit {
  double center = 0.0;   // p_c
  double width = 0.0;    // sigma in exp(-(p - p_c)^2 / sigma), i.e. twice the variance
  double goodness = 0.0; // ||P - G||_2 / ||G||_2 with G the implied normalized Gaussian
};

/// Moment estimate of a Gaussian momentum profile.
GaussianFit fit_gaussian(const MomentumDistribution& marginal);

struct TimeAverages {
  double norm = 1.0;     // mean of N(t_n) over kicks 1..t_M
  double entropy = 0.0;  // mean of S over the recorded kicks >= 1
  std::size_t norm_samples = 0;
  std::size_t entropy_samples = 0;
};

TimeAverages time_averages(const TrajectoryRecord& traj);

/// Everything extracted from one trajectory.
struct FitResults {
  CurrentFit current;
  PowerLawFit width;
  GrowthFit norm_growth;
  GrowthFit diffusion;
  bool width_fit_valid = false;  // false when M1 <= 0 somewhere on the window
  std::vector<std::pair<long, GaussianFit>> gaussians;  // one per stored marginal
};

FitResults fit_all(const TrajectoryRecord& traj, FitWindow window);

}  // namespace ptkr
