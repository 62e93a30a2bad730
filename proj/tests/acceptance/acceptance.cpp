// Acceptance criteria for the two-rotor simulator. One PASS/FAIL line per
// criterion; exit status is the number of failures (capped at 1).
//
//   ptkr_acceptance --suite properties     criteria 1-6 (seconds)
//   ptkr_acceptance --suite reproduction   criteria 7-15 (tens of minutes)
//   ptkr_acceptance --only 11              a single criterion
//   --known-fail N                         still report N, but do not count it in the exit status
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ptkr/dense_oracle.hpp"
#include "ptkr/fitting.hpp"
#include "ptkr/floquet.hpp"
#include "ptkr/phase.hpp"

namespace {

using ptkr::TrajectoryRecord;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

ptkr::SimParams params(double lambda, double epsilon, int m, int kicks) {
  ptkr::SimParams p;
  p.lambda = lambda;
  p.epsilon = epsilon;
  p.lattice_size = m;
  p.n_kicks = kicks;
  return p;
}

// --- properties --------------------------------------------------------------

Outcome oracle_equivalence() {
  const std::pair<double, double> battery[] = {{0, 0}, {0, 1}, {0.01, 0}, {0.01, 1}, {0.01, 5}, {1, 5}};
  double worst = 0.0;
  for (auto [l, e] : battery) {
    const auto p = params(l, e, 16, 20);
    ptkr::EvolveOptions opt;
    opt.schedule.entropy_every = 1;
    const auto fast = ptkr::evolve(p, opt);
    const auto slow = ptkr::oracle::dense_evolve(ptkr::oracle::build_dense(p), p.n_kicks);
    for (std::size_t t = 0; t < fast.records.size(); ++t) {
      const auto& a = fast.records[t];
      const auto& b = slow.records[t];
      worst = std::max({worst, rel(a.p1_mean, b.p1_mean), rel(a.p1_sq_mean, b.p1_sq_mean),
                        rel(a.variance, b.variance), rel(a.norm_total, b.norm_total), rel(a.log_norm, b.log_norm),
                        std::abs(*a.linear_entropy - *b.linear_entropy)});
    }
  }
  return {worst < 1e-9, fmt("max deviation %.2e over 6 parameter sets x 21 records (tol 1e-9)", worst)};
}

Outcome unitarity() {
  const auto traj = ptkr::evolve(params(0.0, 5.0, 128, 1000));
  double worst = 0.0;
  for (const auto& r : traj.records) worst = std::max(worst, std::abs(r.norm_total - 1.0));
  return {worst < 1e-8, fmt("max |N(t)-1| = %.2e over 1000 kicks at M=128 (tol 1e-8)", worst)};
}

Outcome factorization() {
  const auto p = params(0.01, 0.0, 128, 500);
  const ptkr::FloquetEngine engine(p);
  auto psi = ptkr::ground_product_state(p);
  const auto single = ptkr::evolve_single_rotor(p, p.n_kicks);
  double s_max = 0.0, d_max = 0.0;
  for (int t = 0; t <= p.n_kicks; ++t) {
    if (t > 0) engine.step(psi);
    s_max = std::max(s_max, ptkr::linear_entropy(psi));
    const auto& phi = single.states[static_cast<std::size_t>(t)];
    for (int i = 0; i < p.lattice_size; ++i)
      for (int j = 0; j < p.lattice_size; ++j) d_max = std::max(d_max, std::abs(psi.slot(i, j) - phi[i] * phi[j]));
  }
  return {s_max < 1e-10 && d_max < 1e-10,
          fmt("max S = %.2e, max |psi - phi x phi| = %.2e over 500 kicks at M=128 (tol 1e-10)", s_max, d_max)};
}

Outcome swap_symmetry() {
  double worst = 0.0;
  for (double e : {1.0, 5.0}) {
    const auto p = params(0.01, e, 128, 200);
    const ptkr::FloquetEngine engine(p);
    auto psi = ptkr::ground_product_state(p);
    for (int t = 0; t <= p.n_kicks; ++t) {
      if (t > 0) engine.step(psi);
      for (int i = 0; i < p.lattice_size; ++i)
        for (int j = 0; j < i; ++j) worst = std::max(worst, std::abs(psi.slot(i, j) - psi.slot(j, i)));
    }
  }
  return {worst < 1e-12, fmt("max |psi_mn - psi_nm| = %.2e, epsilon in {1,5}, 200 kicks (tol 1e-12)", worst)};
}

Outcome lambda_parity() {
  // The library accepts negative lambda below the config layer.
  const auto plus = ptkr::evolve(params(0.01, 1.0, 1024, 200));
  const auto minus = ptkr::evolve(params(-0.01, 1.0, 1024, 200));
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t t = 0; t < plus.records.size(); ++t) {
    d1 = std::max(d1, std::abs(plus.records[t].p1_mean + minus.records[t].p1_mean));
    d2 = std::max(d2, std::abs(plus.records[t].p1_sq_mean - minus.records[t].p1_sq_mean));
  }
  return {d1 < 1e-10 && d2 < 1e-10,
          fmt("max |<p1>(l)+<p1>(-l)| = %.2e, max |d<p1^2>| = %.2e, 200 kicks at M=1024 (tol 1e-10)", d1, d2)};
}

Outcome fitter_exactness() {
  TrajectoryRecord traj;
  for (long t = 0; t <= 1000; ++t) {
    ptkr::ObservableRecord r;
    r.kick_index = t;
    const double x = static_cast<double>(t);
    r.p1_mean = 0.1846 * x;
    r.variance = 7.1 * std::pow(x, 1.06);
    r.p1_sq_mean = 3.0 + 12.5 * x;
    r.log_norm = 0.0035 * x - 0.2;
    r.norm_total = std::exp(r.log_norm);
    traj.records.push_back(r);
  }
  const ptkr::FitWindow w{500, 1000};
  const auto cur = ptkr::fit_current_rate(traj, w);
  const auto pw = ptkr::fit_power_law_width(traj, w);
  const auto ng = ptkr::fit_norm_growth(traj, w);
  const auto df = ptkr::fit_diffusion_rate(traj, w);
  ptkr::MomentumDistribution d;
  d.first_index = -200;
  for (long m = -200; m < 200; ++m) d.prob.push_back(std::exp(-(m - 10.0) * (m - 10.0) / 40.0));
  const auto g = ptkr::fit_gaussian(d);

  const double par = std::max({std::abs(cur.rate - 0.1846), std::abs(pw.exponent - 1.06),
                               rel(pw.prefactor, 7.1), std::abs(ng.rate - 0.0035), std::abs(ng.intercept + 0.2),
                               std::abs(df.rate - 12.5), std::abs(df.intercept - 3.0), std::abs(g.center - 10.0),
                               rel(g.width, 40.0), g.goodness});
  const double r2 = std::max({1 - cur.r_squared, 1 - pw.r_squared, 1 - ng.r_squared, 1 - df.r_squared});
  return {par < 1e-10 && r2 < 1e-12,
          fmt("max parameter error %.2e, max 1-r^2 %.2e (tol 1e-10)", par, r2)};
}

// --- reproduction ------------------------------------------------------------

constexpr int kLattice = 1024;
constexpr int kKicks = 1000;

// Trajectories are shared between criteria.
const TrajectoryRecord& run(double lambda, double epsilon, int m = kLattice, int kicks = kKicks) {
  static std::map<std::tuple<double, double, int, int>, TrajectoryRecord> cache;
  const auto key = std::make_tuple(lambda, epsilon, m, kicks);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  ptkr::EvolveOptions opt;
  opt.recenter = true;
  opt.schedule.entropy_every = 5;
  opt.schedule.marginal_kicks = {kicks / 2};
  const auto t0 = std::chrono::steady_clock::now();
  auto traj = ptkr::evolve(params(lambda, epsilon, m, kicks), opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "  [run lambda=%g epsilon=%g M=%d T=%d: %.0f s, max edge prob %.1e, %d window shifts]\n",
               lambda, epsilon, m, kicks, secs, traj.max_edge_probability, traj.window_shifts);
  return cache[key] = std::move(traj);
}

ptkr::FitWindow last_half(const TrajectoryRecord& t) { return ptkr::default_window(t, 0.5); }

std::string leak_note(const TrajectoryRecord& t) {
  return t.truncation_leak ? fmt(" [edge leak flagged at t=%ld]", t.first_leak_kick) : std::string();
}

Outcome localization() {
  const auto& t = run(0.01, 0.0, 512);
  const auto w = last_half(t);
  const auto diff = ptkr::fit_diffusion_rate(t, w);
  double mean = 0.0;
  int n = 0;
  for (const auto& r : t.records)
    if (r.kick_index >= w.t_start) mean += r.p1_sq_mean, ++n;
  mean /= n;
  const double nbar = ptkr::time_averages(t).norm;
  const double gamma = ptkr::fit_norm_growth(t, w).rate;
  const bool pass = std::abs(diff.rate) < 0.01 * mean && nbar >= 0.9 && nbar <= 1.1 && std::abs(gamma) < 1e-4;
  return {pass, fmt("slope(<p1^2>) = %.3g/kick vs 1%% of mean %.4g = %.3g (drift over window %.1f%%); "
                    "Nbar = %.4f; gamma_norm = %.2e",
                    diff.rate, mean, 0.01 * mean, 100.0 * diff.rate * (w.t_end - w.t_start) / mean, nbar, gamma) +
                    leak_note(t)};
}

Outcome norm_growth() {
  const auto& a = run(0.01, 1.0);
  const auto& b = run(0.01, 5.0);
  const double ga = ptkr::fit_norm_growth(a, last_half(a)).rate;
  const double gb = ptkr::fit_norm_growth(b, last_half(b)).rate;
  const bool pass = std::abs(ga / 0.0035 - 1) <= 0.3 && std::abs(gb / 0.0051 - 1) <= 0.3;
  return {pass, fmt("gamma_norm(eps=1) = %.5f (target 0.0035 +-30%%), gamma_norm(eps=5) = %.5f (target 0.0051 "
                    "+-30%%), window [%ld, %ld]",
                    ga, gb, last_half(a).t_start, last_half(a).t_end) +
                    leak_note(a) + leak_note(b)};
}

Outcome current_linearity() {
  const auto& t = run(0.01, 1.0);
  const auto f = ptkr::fit_current_rate(t, last_half(t));
  return {f.r_squared > 0.99, fmt("r^2 = %.5f, D = %.4f (endpoint %.4f) on [%ld, %ld]", f.r_squared, f.rate,
                                  f.endpoint_rate, f.window.t_start, f.window.t_end) +
                                  leak_note(t)};
}

Outcome mbd_exponent() {
  const auto& t = run(0.01, 1.0);
  const auto f = ptkr::fit_power_law_width(t, last_half(t));
  return {std::abs(f.exponent - 1.0) <= 0.15,
          fmt("alpha = %.4f (target 1 +-0.15), eta = %.3f, r^2 = %.4f", f.exponent, f.prefactor, f.r_squared) +
              leak_note(t)};
}

Outcome current_scaling() {
  std::vector<double> x, y;
  std::string detail;
  for (double l : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}) {
    const auto& t = run(l, 5.0);
    const double d = ptkr::fit_current_rate(t, last_half(t)).rate;
    detail += fmt("D(%g)=%.4g ", l, d);
    if (!(d > 0)) return {false, detail + "nonpositive D"};
    x.push_back(std::log(l));
    y.push_back(std::log(d));
  }
  const auto f = ptkr::fit_line(x, y);
  return {std::abs(f.slope - 1.0) <= 0.15, fmt("slope d ln D / d ln lambda = %.4f (target 1 +-0.15); ", f.slope) + detail};
}

Outcome width_scaling() {
  std::vector<double> x, y;
  std::string detail;
  for (double e : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    const auto& t = run(1e-3, e);
    const auto f = ptkr::fit_power_law_width(t, last_half(t));
    detail += fmt("eta(%g)=%.3g (alpha %.2f) ", e, f.prefactor, f.exponent);
    x.push_back(e);
    y.push_back(std::log(f.prefactor));
  }
  const auto f = ptkr::fit_line(x, y);
  return {std::abs(f.slope - 0.1) <= 0.05, fmt("beta = %.4f (target 0.1 +-0.05); ", f.slope) + detail};
}

double goodness_at(const TrajectoryRecord& t, long kick) {
  for (const auto& s : t.marginals)
    if (s.kick_index == kick) return ptkr::fit_gaussian(s.distribution).goodness;
  return NAN;
}

Outcome gaussianity() {
  const double small = goodness_at(run(0.01, 5.0), 500);
  const double large = goodness_at(run(5.0, 5.0), 500);
  const bool pass = small < 0.2 && large >= 5.0 * small;
  return {pass, fmt("goodness(lambda=0.01) = %.4f (< 0.2), goodness(lambda=5) = %.4f, ratio %.1f (>= 5)", small,
                    large, large / small)};
}

Outcome entropy_saturation() {
  const auto& a = run(0.01, 5.0);
  long first = -1;
  double min_after = 1.0;
  for (const auto& r : a.records) {
    if (!r.linear_entropy) continue;
    if (first < 0 && *r.linear_entropy > 0.9) first = r.kick_index;
    if (first >= 0) min_after = std::min(min_after, *r.linear_entropy);
  }
  const double sbar = ptkr::time_averages(run(10.0, 5.0)).entropy;
  const bool pass = first >= 0 && min_after > 0.9 && sbar < 0.1;
  return {pass, fmt("lambda=0.01: S > 0.9 from t=%ld on, min afterwards %.4f; lambda=10: Sbar = %.4f (< 0.1)", first,
                    min_after, sbar)};
}

Outcome boundary_monotonicity() {
  const std::vector<double> lambdas{1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1};
  std::vector<ptkr::GridPoint> grid;
  for (double l : lambdas)
    for (double e : {0.0, 0.2, 1.0, 5.0}) grid.push_back({l, e});
  ptkr::AnalysisOptions opt;
  opt.evolve.recenter = true;
  opt.evolve.schedule.entropy_every = 0;
  const auto results = ptkr::sweep_phase_diagram(grid, params(0, 0, 256, kKicks), opt);
  std::map<double, double> onset;
  std::string detail;
  for (double e : {0.0, 0.2, 1.0, 5.0}) {
    onset[e] = INFINITY;
    for (const auto& r : results) {
      if (r.point.epsilon == e && r.point.pt_broken) onset[e] = std::min(onset[e], r.point.lambda);
    }
    detail += fmt("onset(eps=%g)=%g ", e, onset[e]);
  }
  const bool monotone = onset[0.2] <= onset[0.0] && onset[1.0] <= onset[0.2] && onset[5.0] <= onset[1.0] &&
                        onset[5.0] < onset[0.0];
  return {monotone, detail + "(Nbar > 1.1 on M=256, 1000 kicks)"};
}

struct Criterion {
  int id;
  const char* name;
  bool long_running;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  std::string suite = "all";
  int only = 0;
  std::set<int> known_fail;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--suite") && i + 1 < argc) suite = argv[++i];
    else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--known-fail") && i + 1 < argc) known_fail.insert(std::atoi(argv[++i]));
    else {
      std::fprintf(stderr, "usage: %s [--suite properties|reproduction|all] [--only N] [--known-fail N]...\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", false, oracle_equivalence},
      {2, "unitarity", false, unitarity},
      {3, "factorization", false, factorization},
      {4, "swap symmetry", false, swap_symmetry},
      {5, "lambda parity", false, lambda_parity},
      {6, "fitter exactness", false, fitter_exactness},
      {7, "dynamical localization", true, localization},
      {8, "norm growth rate", true, norm_growth},
      {9, "directed current linearity", true, current_linearity},
      {10, "MBD exponent", true, mbd_exponent},
      {11, "D proportional to lambda", true, current_scaling},
      {12, "eta exponential in epsilon", true, width_scaling},
      {13, "gaussianity", true, gaussianity},
      {14, "entropy saturation", true, entropy_saturation},
      {15, "boundary monotonicity", true, boundary_monotonicity},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (only ? c.id != only : (suite == "properties" && c.long_running) || (suite == "reproduction" && !c.long_running))
      continue;
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool known = !o.pass && known_fail.count(c.id);
    std::printf("%s  criterion %2d  %-28s %s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                known ? " [known deviation, not counted]" : "");
    std::fflush(stdout);
    failures += o.pass || known ? 0 : 1;
  }
  return failures ? 1 : 0;
}
