#include "ptkr/phase.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "ptkr/errors.hpp"

namespace ptkr {
namespace {

double variance_at(const TrajectoryRecord& traj, long t) {
  auto it = std::find_if(traj.records.rbegin(), traj.records.rend(),
                         [t](const ObservableRecord& r) { return r.kick_index <= t; });
  return it == traj.records.rend() ? 0.0 : it->variance;
}

}  // namespace

std::string_view roman(Phase phase) {
  switch (phase) {
    case Phase::Localized: return "I";
    case Phase::ChaoticDiffusion: return "II";
    case Phase::BallisticSoliton: return "III";
    case Phase::DirectedMbd: return "IV";
    case Phase::Undetermined: break;
  }
  return "?";
}

PointSummary summarize(const TrajectoryRecord& traj, FitWindow window) {
  PointSummary s;
  s.lambda = traj.params.lambda;
  s.epsilon = traj.params.epsilon;
  s.averages = time_averages(traj);
  s.fit = fit_all(traj, window);

  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : traj.records) {
    if (r.kick_index < window.t_start || r.kick_index > window.t_end) continue;
    sum += r.p1_sq_mean;
    ++n;
  }
  s.p1_sq_mean_on_window = n > 0 ? sum / static_cast<double>(n) : 0.0;
  const double span = static_cast<double>(window.t_end - window.t_start);
  s.diffusion_indicator = s.p1_sq_mean_on_window > 0.0
                              ? s.fit.diffusion.rate * span / s.p1_sq_mean_on_window
                              : 0.0;

  const double late = variance_at(traj, window.t_end);
  const double early = variance_at(traj, window.t_end / 2);
  if (early > 0.0) {
    s.width_ratio = late / early;
  } else {
    s.width_ratio = late > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return s;
}

PhasePoint classify_phase(const PointSummary& s, const ClassifierThresholds& th) {
  if (std::isnan(s.averages.norm) || !std::isfinite(s.diffusion_indicator) || std::isnan(s.width_ratio)) {
    throw InconsistentFits("non-finite summary at lambda=" + std::to_string(s.lambda) +
                           " epsilon=" + std::to_string(s.epsilon));
  }
  PhasePoint p;
  p.lambda = s.lambda;
  p.epsilon = s.epsilon;
  p.norm_time_avg = s.averages.norm;
  p.entropy_time_avg = s.averages.entropy;
  p.plateau_level = s.p1_sq_mean_on_window;
  p.diffusion_indicator = s.diffusion_indicator;
  p.width_ratio = s.width_ratio;
  p.fit = s.fit;
  p.pt_broken = s.averages.norm > 1.0 + th.norm_margin;
  if (!p.pt_broken) {
    p.phase = s.diffusion_indicator < th.diffusion_growth ? Phase::Localized : Phase::ChaoticDiffusion;
  } else {
    p.phase = s.width_ratio < th.width_ratio ? Phase::BallisticSoliton : Phase::DirectedMbd;
  }
  return p;
}

FitWindow resolve_window(const TrajectoryRecord& traj, const AnalysisOptions& options) {
  FitWindow w = default_window(traj, options.window_fraction);
  if (options.window_start) w.t_start = std::min(*options.window_start, traj.final_kick());
  if (options.window_end) w.t_end = std::min(*options.window_end, traj.final_kick());
  return w;
}

PointResult analyze_point(const SimParams& params, const AnalysisOptions& options, bool keep_trajectory) {
  PointResult out;
  out.point.lambda = params.lambda;
  out.point.epsilon = params.epsilon;
  TrajectoryRecord traj;
  try {
    traj = evolve(params, options.evolve);
  } catch (const std::exception& e) {
    out.point.error = e.what();
    return out;
  }
  // A failed fit still leaves a usable trajectory behind.
  try {
    out.point = classify_phase(summarize(traj, resolve_window(traj, options)), options.thresholds);
  } catch (const std::exception& e) {
    out.point.phase = Phase::Undetermined;
    out.point.error = e.what();
  }
  out.point.truncation_leak = traj.truncation_leak;
  if (keep_trajectory) out.trajectory = std::move(traj);
  return out;
}

std::vector<PointResult> sweep_phase_diagram(const std::vector<GridPoint>& grid, const SimParams& base,
                                             const AnalysisOptions& options, int workers,
                                             bool keep_trajectories) {
  if (grid.empty()) throw ValidationError("sweep", "grid is empty");
  std::vector<GridPoint> cells = grid;
  std::stable_sort(cells.begin(), cells.end(), [](const GridPoint& a, const GridPoint& b) {
    return a.lambda != b.lambda ? a.lambda < b.lambda : a.epsilon < b.epsilon;
  });

  std::vector<PointResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      SimParams p = base;
      p.lambda = cells[i].lambda;
      p.epsilon = cells[i].epsilon;
      results[i] = analyze_point(p, options, keep_trajectories);
    }
  };

  const int n = std::clamp(workers, 1, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n - 1));
  for (int i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace ptkr
