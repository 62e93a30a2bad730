#include "ptkr/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "ptkr/dense_oracle.hpp"
#include "ptkr/errors.hpp"
#include "ptkr/io.hpp"

namespace ptkr {
namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cannot write " + path.string());
}

std::string phase_file(OutputFormat f) { return f == OutputFormat::Csv ? "phase_diagram.csv" : "phase_diagram.json"; }

void write_summary(const RunConfig& config, RunSummary& s, bool phase_diagram) {
  std::error_code ec;
  fs::remove(config.output_dir / "error.json", ec);  // left over from an earlier failed invocation
  const fs::path fits = config.output_dir / "fits.json";
  write_text(fits, io::fits_json(s.results, config));
  s.files.push_back(fits);
  if (phase_diagram) {
    std::vector<PhasePoint> points;
    for (const auto& r : s.results) points.push_back(r.point);
    const fs::path p = config.output_dir / phase_file(config.format);
    io::write_phase_diagram(p, points, config.format);
    s.files.push_back(p);
  }
  for (const auto& r : s.results) s.failed_points += r.point.error ? 1 : 0;
}

}  // namespace

RunSummary execute_run(const RunConfig& config) {
  const auto grid = config.grid();
  const AnalysisOptions options = config.analysis_options();
  RunSummary s;
  s.results = sweep_phase_diagram(grid, config.params, options, config.workers, true);

  ensure_dir(config.output_dir);
  for (const auto& r : s.results) {
    if (!r.trajectory) continue;
    const auto& traj = *r.trajectory;
    const fs::path tp = config.output_dir / io::trajectory_filename(r.point.lambda, r.point.epsilon, config.format);
    io::write_trajectory(tp, traj, config.format);
    s.files.push_back(tp);
    for (const auto& snap : traj.marginals) {
      const fs::path mp = config.output_dir /
                          io::marginal_filename(r.point.lambda, r.point.epsilon, snap.kick_index, config.format);
      io::write_marginal(mp, snap, config.format);
      s.files.push_back(mp);
    }
  }
  write_summary(config, s, config.sweep || grid.size() > 1);
  return s;
}

RunSummary execute_fit(const RunConfig& config, const fs::path& input_dir) {
  if (!fs::is_directory(input_dir)) throw Error("not a directory: " + input_dir.string());
  std::vector<fs::path> inputs;
  for (const auto& e : fs::directory_iterator(input_dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("trajectory_", 0) == 0 && e.path().extension() == ".csv") inputs.push_back(e.path());
  }
  if (inputs.empty()) throw Error("no trajectory_*.csv files in " + input_dir.string());
  std::sort(inputs.begin(), inputs.end());

  AnalysisOptions options = config.analysis_options();
  RunSummary s;
  for (const auto& path : inputs) {
    TrajectoryRecord traj = io::read_trajectory_csv(path);
    traj.params.kick_strength = config.params.kick_strength;
    traj.params.hbar_eff = config.params.hbar_eff;
    traj.params.lattice_size = config.params.lattice_size;

    // Marginal snapshots that belong to this trajectory.
    const std::string stem = path.stem().string().substr(std::string("trajectory_").size());
    std::vector<std::pair<long, fs::path>> snaps;
    for (const auto& e : fs::directory_iterator(input_dir)) {
      const std::string name = e.path().filename().string();
      const std::string prefix = "marginal_" + stem + "_t";
      if (name.rfind(prefix, 0) == 0 && e.path().extension() == ".csv") {
        snaps.emplace_back(std::stol(name.substr(prefix.size())), e.path());
      }
    }
    std::sort(snaps.begin(), snaps.end());
    for (const auto& [t, p] : snaps) traj.marginals.push_back({t, io::read_marginal_csv(p)});

    PointResult r;
    r.point.lambda = traj.params.lambda;
    r.point.epsilon = traj.params.epsilon;
    try {
      r.point = classify_phase(summarize(traj, resolve_window(traj, options)), options.thresholds);
      r.point.truncation_leak = traj.truncation_leak;
    } catch (const std::exception& e) {
      r.point.error = e.what();
    }
    s.results.push_back(std::move(r));
  }
  std::stable_sort(s.results.begin(), s.results.end(), [](const PointResult& a, const PointResult& b) {
    return a.point.lambda != b.point.lambda ? a.point.lambda < b.point.lambda : a.point.epsilon < b.point.epsilon;
  });
  ensure_dir(config.output_dir);
  write_summary(config, s, true);
  return s;
}

// --- self check ------------------------------------------------------------

namespace {

constexpr int kCheckLattice = 16;

SimParams check_params(double lambda, double epsilon, int kicks) {
  SimParams p;
  p.lambda = lambda;
  p.epsilon = epsilon;
  p.lattice_size = kCheckLattice;
  p.n_kicks = kicks;
  return p;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

CheckResult finish(std::string name, double dev, double tol) {
  return {std::move(name), std::isfinite(dev) && dev < tol, dev, tol};
}

CheckResult oracle_equivalence() {
  const std::pair<double, double> battery[] = {{0, 0}, {0, 1}, {0.01, 0}, {0.01, 1}, {0.01, 5}, {1, 5}};
  double worst = 0.0;
  for (auto [lambda, epsilon] : battery) {
    const SimParams p = check_params(lambda, epsilon, 20);
    EvolveOptions opt;
    opt.schedule.entropy_every = 1;
    const auto fast = evolve(p, opt);
    const auto slow = oracle::dense_evolve(oracle::build_dense(p), p.n_kicks);
    for (std::size_t t = 0; t < fast.records.size(); ++t) {
      const auto& a = fast.records[t];
      const auto& b = slow.records[t];
      worst = std::max({worst, rel_diff(a.p1_mean, b.p1_mean), rel_diff(a.p1_sq_mean, b.p1_sq_mean),
                        rel_diff(a.variance, b.variance), rel_diff(a.log_norm, b.log_norm),
                        rel_diff(a.linear_entropy.value_or(NAN), b.linear_entropy.value_or(NAN))});
    }
  }
  return finish("oracle equivalence (6 parameter sets, 20 kicks)", worst, 1e-9);
}

CheckResult unitarity() {
  const auto traj = evolve(check_params(0.0, 5.0, 1000), {});
  double worst = 0.0;
  for (const auto& r : traj.records) worst = std::max(worst, std::abs(r.norm_total - 1.0));
  return finish("unitarity at lambda=0 (1000 kicks)", worst, 1e-8);
}

CheckResult factorization() {
  const SimParams p = check_params(0.01, 0.0, 500);
  const FloquetEngine engine(p);
  WaveFunction psi = ground_product_state(p);
  const auto single = evolve_single_rotor(p, p.n_kicks);
  const int m = p.lattice_size;
  double worst = 0.0;
  for (int t = 0; t <= p.n_kicks; ++t) {
    if (t > 0) engine.step(psi);
    worst = std::max(worst, linear_entropy(psi));
    const auto& phi = single.states[static_cast<std::size_t>(t)];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) worst = std::max(worst, std::abs(psi.slot(i, j) - phi[i] * phi[j]));
  }
  return finish("factorization at epsilon=0 (500 kicks)", worst, 1e-10);
}

CheckResult swap_symmetry() {
  const SimParams p = check_params(0.01, 1.0, 200);
  const FloquetEngine engine(p);
  WaveFunction psi = ground_product_state(p);
  double worst = 0.0;
  for (int t = 0; t <= p.n_kicks; ++t) {
    if (t > 0) engine.step(psi);
    for (int i = 0; i < p.lattice_size; ++i)
      for (int j = 0; j < i; ++j) worst = std::max(worst, std::abs(psi.slot(i, j) - psi.slot(j, i)));
  }
  return finish("swap symmetry (200 kicks)", worst, 1e-12);
}

// On the periodic lattice the relation psi(-lambda)_{m,n} = psi(lambda)_{-m,-n}
// (indices mod M) is exact even when the state reaches the window edge, where
// the moment form of the relation picks up the unpaired m = -M/2 mode.
CheckResult lambda_parity() {
  const SimParams plus = check_params(0.01, 1.0, 200);
  const SimParams minus = check_params(-0.01, 1.0, 200);
  const FloquetEngine ep(plus), em(minus);
  WaveFunction a = ground_product_state(plus), b = ground_product_state(minus);
  const int m = plus.lattice_size;
  double worst = 0.0;
  for (int t = 0; t <= plus.n_kicks; ++t) {
    if (t > 0) {
      ep.step(a);
      em.step(b);
    }
    worst = std::max(worst, std::abs(a.log_norm() - b.log_norm()));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) worst = std::max(worst, std::abs(a.slot(i, j) - b.slot((m - i) % m, (m - j) % m)));
  }
  return finish("lambda parity (200 kicks)", worst, 1e-10);
}

CheckResult fitter_exactness() {
  TrajectoryRecord traj;
  for (long t = 0; t <= 200; ++t) {
    ObservableRecord r;
    r.kick_index = t;
    const double td = static_cast<double>(t);
    r.p1_mean = 0.25 * td;
    r.variance = 3.0 * std::pow(td, 1.5);
    r.p1_sq_mean = r.variance + r.p1_mean * r.p1_mean;
    r.log_norm = -0.5 + 0.004 * td;
    r.norm_total = std::exp(r.log_norm);
    traj.records.push_back(r);
  }
  const FitWindow w{100, 200};
  const auto cur = fit_current_rate(traj, w);
  const auto pw = fit_power_law_width(traj, w);
  const auto ng = fit_norm_growth(traj, w);
  const double worst = std::max({std::abs(cur.rate - 0.25), std::abs(pw.exponent - 1.5),
                                 std::abs(pw.prefactor - 3.0), std::abs(ng.rate - 0.004),
                                 std::abs(ng.intercept + 0.5), std::abs(1.0 - cur.r_squared),
                                 std::abs(1.0 - pw.r_squared), std::abs(1.0 - ng.r_squared)});
  return finish("fitter exactness on synthetic data", worst, 1e-10);
}

}  // namespace

std::vector<CheckResult> self_check() {
  std::vector<CheckResult> out;
  for (auto fn : {oracle_equivalence, unitarity, factorization, swap_symmetry, lambda_parity, fitter_exactness}) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({std::string("check aborted: ") + e.what(), false, NAN, 0.0});
    }
  }
  return out;
}

}  // namespace ptkr
