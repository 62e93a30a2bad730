#include "ptkr/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptkr/errors.hpp"

namespace ptkr {
namespace {

struct Series {
  std::vector<double> t;
  std::vector<double> y;
};

template <class Getter>
Series collect(const TrajectoryRecord& traj, FitWindow w, Getter get, long min_t = 0) {
  if (w.t_start > w.t_end || w.t_start < 0 || w.t_end > traj.final_kick()) {
    throw WindowTooShort("window [" + std::to_string(w.t_start) + ", " + std::to_string(w.t_end) +
                         "] outside trajectory [0, " + std::to_string(traj.final_kick()) + "]");
  }
  Series s;
  for (const auto& r : traj.records) {
    if (r.kick_index < std::max(w.t_start, min_t) || r.kick_index > w.t_end) continue;
    s.t.push_back(static_cast<double>(r.kick_index));
    s.y.push_back(get(r));
  }
  if (s.t.size() < kMinWindowSamples) {
    throw WindowTooShort("window holds " + std::to_string(s.t.size()) + " samples, need " +
                         std::to_string(kMinWindowSamples));
  }
  return s;
}

const ObservableRecord& record_at(const TrajectoryRecord& traj, long t) {
  auto it = std::find_if(traj.records.rbegin(), traj.records.rend(),
                         [t](const ObservableRecord& r) { return r.kick_index <= t; });
  if (it == traj.records.rend()) throw WindowTooShort("no record at or before kick " + std::to_string(t));
  return *it;
}

GrowthFit growth(const Series& s, FitWindow w) {
  const LineFit f = fit_line(s.t, s.y);
  return {f.slope, f.intercept, f.r_squared, w};
}

}  // namespace

FitWindow default_window(const TrajectoryRecord& traj, double fraction) {
  const long tf = traj.final_kick();
  const long span = std::lround(fraction * static_cast<double>(tf));
  return {tf - span, tf};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw WindowTooShort("line fit needs at least two paired samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw WindowTooShort("line fit needs at least two distinct abscissae");

  LineFit f;
  f.samples = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ssr += r * r;
  }
  // Residuals at roundoff level of a constant series count as a perfect fit.
  if (syy <= 1e-28 * std::max(1.0, my * my) * static_cast<double>(n)) {
    f.r_squared = 1.0;
  } else {
    f.r_squared = std::clamp(1.0 - ssr / syy, 0.0, 1.0);
  }
  return f;
}

CurrentFit fit_current_rate(const TrajectoryRecord& traj, FitWindow window) {
  const Series s = collect(traj, window, [](const ObservableRecord& r) { return r.p1_mean; });
  const LineFit f = fit_line(s.t, s.y);
  CurrentFit c;
  c.rate = f.slope;
  c.intercept = f.intercept;
  c.r_squared = f.r_squared;
  c.window = window;
  const auto& last = record_at(traj, window.t_end);
  c.endpoint_rate = last.kick_index > 0 ? last.p1_mean / static_cast<double>(last.kick_index) : 0.0;
  return c;
}

PowerLawFit fit_power_law_width(const TrajectoryRecord& traj, FitWindow window) {
  Series s = collect(traj, window, [](const ObservableRecord& r) { return r.variance; }, 1);
  for (std::size_t i = 0; i < s.y.size(); ++i) {
    if (!(s.y[i] > 0.0)) {
      throw NonpositiveWidth("M1 = " + std::to_string(s.y[i]) + " at kick " +
                             std::to_string(static_cast<long>(s.t[i])));
    }
    s.t[i] = std::log(s.t[i]);
    s.y[i] = std::log(s.y[i]);
  }
  const LineFit f = fit_line(s.t, s.y);
  PowerLawFit p;
  p.exponent = f.slope;
  p.prefactor = std::exp(f.intercept);
  p.r_squared = f.r_squared;
  p.window = window;
  const auto& last = record_at(traj, window.t_end);
  p.endpoint_prefactor = last.variance / std::pow(static_cast<double>(last.kick_index), p.exponent);
  return p;
}

GrowthFit fit_norm_growth(const TrajectoryRecord& traj, FitWindow window) {
  return growth(collect(traj, window, [](const ObservableRecord& r) { return r.log_norm; }), window);
}

GrowthFit fit_diffusion_rate(const TrajectoryRecord& traj, FitWindow window) {
  return growth(collect(traj, window, [](const ObservableRecord& r) { return r.p1_sq_mean; }), window);
}

GaussianFit fit_gaussian(const MomentumDistribution& marginal) {
  const auto& prob = marginal.prob;
  double total = 0.0, mean = 0.0;
  for (std::size_t k = 0; k < prob.size(); ++k) {
    total += prob[k];
    mean += marginal.momentum(k) * prob[k];
  }
  GaussianFit g;
  if (!(total > 0.0)) return g;
  mean /= total;
  double var = 0.0;
  for (std::size_t k = 0; k < prob.size(); ++k) {
    const double d = marginal.momentum(k) - mean;
    var += d * d * prob[k];
  }
  var /= total;
  g.center = mean;
  g.width = 2.0 * var;
  if (!(g.width > 0.0)) return g;  // a single occupied mode is its own best fit

  std::vector<double> model(prob.size());
  double zsum = 0.0;
  for (std::size_t k = 0; k < prob.size(); ++k) {
    const double d = marginal.momentum(k) - mean;
    model[k] = std::exp(-d * d / g.width);
    zsum += model[k];
  }
  double diff2 = 0.0, model2 = 0.0;
  for (std::size_t k = 0; k < prob.size(); ++k) {
    model[k] /= zsum;
    const double d = prob[k] / total - model[k];
    diff2 += d * d;
    model2 += model[k] * model[k];
  }
  g.goodness = std::sqrt(diff2 / model2);
  return g;
}

TimeAverages time_averages(const TrajectoryRecord& traj) {
  TimeAverages a;
  double nsum = 0.0, ssum = 0.0;
  for (const auto& r : traj.records) {
    if (r.kick_index < 1) continue;
    nsum += r.norm_total;
    ++a.norm_samples;
    if (r.linear_entropy) {
      ssum += *r.linear_entropy;
      ++a.entropy_samples;
    }
  }
  if (a.norm_samples > 0) a.norm = nsum / static_cast<double>(a.norm_samples);
  if (a.entropy_samples > 0) a.entropy = ssum / static_cast<double>(a.entropy_samples);
  return a;
}

FitResults fit_all(const TrajectoryRecord& traj, FitWindow window) {
  FitResults f;
  f.current = fit_current_rate(traj, window);
  f.norm_growth = fit_norm_growth(traj, window);
  f.diffusion = fit_diffusion_rate(traj, window);
  try {
    f.width = fit_power_law_width(traj, window);
    f.width_fit_valid = true;
  } catch (const NonpositiveWidth&) {
    f.width.window = window;
    f.width_fit_valid = false;
  }
  for (const auto& snap : traj.marginals) f.gaussians.emplace_back(snap.kick_index, fit_gaussian(snap.distribution));
  return f;
}

}  // namespace ptkr
