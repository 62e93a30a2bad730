#include "ptkr/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fftw_plan.hpp"
#include "ptkr/errors.hpp"
#include "ptkr/observables.hpp"

namespace ptkr {
namespace {

constexpr Complex kI{0.0, 1.0};

// Largest log gain of one kick the engine accepts; |kick| <= exp(2 K |lambda| / hbar).
constexpr double kMaxLogGain = 300.0;

int signed_slot(int i, int m) { return i < m / 2 ? i : i - m; }

Complex potential(const SimParams& p, double theta) {
  return p.kick_strength * Complex{std::cos(theta), p.lambda * std::sin(theta)};
}

std::vector<Complex> free_phases(int m, long offset, double hbar) {
  std::vector<Complex> f(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double q = static_cast<double>(offset + signed_slot(i, m));
    f[static_cast<std::size_t>(i)] = std::exp(-kI * (0.5 * hbar * q * q));
  }
  return f;
}

void check_gain(const SimParams& p) {
  if (2.0 * std::abs(p.kick_strength * p.lambda) / p.hbar_eff > kMaxLogGain) {
    throw ValidationError("lambda", "kick gain exp(2 K |lambda| / hbar) overflows double precision");
  }
}

ObservableRecord observe(const WaveFunction& state, const SimParams& p, bool with_entropy,
                         double leak_threshold) {
  ObservableRecord r;
  r.kick_index = state.kick_index();
  const auto dist = momentum_marginal(state, Particle::One, p.hbar_eff);
  r.p1_mean = momentum_moment(dist, 1);
  r.p1_sq_mean = momentum_moment(dist, 2);
  r.variance = r.p1_sq_mean - r.p1_mean * r.p1_mean;
  r.log_norm = state.log_norm();
  r.norm_total = std::exp(state.log_norm());
  if (with_entropy) r.linear_entropy = linear_entropy(state);
  r.edge_probability = edge_leakage(state);
  r.leak_flag = r.edge_probability > leak_threshold;
  return r;
}

}  // namespace

KickPhaseTable build_tables(const SimParams& p) {
  check_lattice(p);
  check_gain(p);
  const int m = p.lattice_size;
  KickPhaseTable t;
  t.lattice_size = m;
  t.hbar_eff = p.hbar_eff;

  std::vector<double> theta(static_cast<std::size_t>(m));
  std::vector<Complex> v(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    theta[k] = 2.0 * std::numbers::pi * k / m;
    v[k] = potential(p, theta[k]);
  }
  t.kick_factor.resize(static_cast<std::size_t>(m) * m);
  // Symmetric under theta1 <-> theta2; the engine relies on this to apply it
  // in the transposed angle layout.
  for (int k1 = 0; k1 < m; ++k1) {
    for (int k2 = k1; k2 < m; ++k2) {
      const Complex total = v[k1] + v[k2] + p.epsilon * std::cos(theta[k1] - theta[k2]);
      const Complex f = std::exp(-kI * total / p.hbar_eff);
      t.kick_factor[static_cast<std::size_t>(k1) * m + k2] = f;
      t.kick_factor[static_cast<std::size_t>(k2) * m + k1] = f;
    }
  }
  t.free_phase = free_phases(m, 0, p.hbar_eff);
  return t;
}

struct FloquetEngine::Transform {
  explicit Transform(int m) : grid(m) {}
  detail::Transform2D grid;
};

FloquetEngine::FloquetEngine(const SimParams& params)
    : params_(params),
      tables_(build_tables(params)),
      fft_(std::make_unique<Transform>(params.lattice_size)) {}

FloquetEngine::~FloquetEngine() = default;
FloquetEngine::FloquetEngine(FloquetEngine&&) noexcept = default;
FloquetEngine& FloquetEngine::operator=(FloquetEngine&&) noexcept = default;

void FloquetEngine::apply_kick(WaveFunction& state) const {
  const int m = tables_.lattice_size;
  if (state.lattice_size() != m) {
    throw DimensionMismatch("state lattice " + std::to_string(state.lattice_size()) +
                            " != table lattice " + std::to_string(m));
  }
  Complex* data = state.amplitudes().data();
  fft_->grid.to_angle(data);
  const double scale = 1.0 / (static_cast<double>(m) * m);
  const std::size_t count = static_cast<std::size_t>(m) * m;
  const Complex* kick = tables_.kick_factor.data();
  for (std::size_t i = 0; i < count; ++i) data[i] *= kick[i] * scale;
  fft_->grid.to_momentum(data);
}

void FloquetEngine::apply_free(WaveFunction& state) const {
  const int m = tables_.lattice_size;
  if (state.lattice_size() != m) {
    throw DimensionMismatch("state lattice " + std::to_string(state.lattice_size()) +
                            " != table lattice " + std::to_string(m));
  }
  const std::vector<Complex> shifted =
      state.offset() == 0 ? std::vector<Complex>{} : free_phases(m, state.offset(), tables_.hbar_eff);
  const std::vector<Complex>& f = state.offset() == 0 ? tables_.free_phase : shifted;
  for (int i1 = 0; i1 < m; ++i1) {
    Complex* row = &state.slot(i1, 0);
    const Complex f1 = f[static_cast<std::size_t>(i1)];
    for (int i2 = 0; i2 < m; ++i2) row[i2] *= f1 * f[static_cast<std::size_t>(i2)];
  }
}

double FloquetEngine::step(WaveFunction& state) const {
  apply_kick(state);
  apply_free(state);
  const double factor = normalize(state);
  state.set_kick_index(state.kick_index() + 1);
  return factor;
}

long recenter_window(WaveFunction& state, int tolerance) {
  const int m = state.lattice_size();
  double weight = 0.0;
  double centre = 0.0;
  for (int i1 = 0; i1 < m; ++i1) {
    double row = 0.0;
    for (int i2 = 0; i2 < m; ++i2) row += std::norm(state.slot(i1, i2));
    weight += row;
    centre += row * signed_slot(i1, m);
  }
  if (!(weight > 0.0)) return 0;
  const long shift = std::lround(centre / weight);
  if (std::abs(shift) <= tolerance) return 0;
  state.shift_window(shift);
  return shift;
}

TrajectoryRecord evolve(const SimParams& params, const EvolveOptions& options) {
  check_lattice(params);
  const FloquetEngine engine(params);
  const auto& sched = options.schedule;
  const long last = params.n_kicks;

  auto wants_entropy = [&](long t) {
    return sched.entropy_every > 0 && (t == 0 || t == last || t % sched.entropy_every == 0);
  };
  auto wants_marginal = [&](long t) {
    return std::find(sched.marginal_kicks.begin(), sched.marginal_kicks.end(), t) !=
           sched.marginal_kicks.end();
  };

  TrajectoryRecord traj;
  traj.params = params;
  traj.leak_threshold = options.leak_threshold;
  traj.records.reserve(static_cast<std::size_t>(last) + 1);

  WaveFunction psi = ground_product_state(params);
  auto record = [&](double factor) {
    ObservableRecord r = observe(psi, params, wants_entropy(psi.kick_index()), options.leak_threshold);
    r.norm_factor = factor;
    traj.max_edge_probability = std::max(traj.max_edge_probability, r.edge_probability);
    if (r.leak_flag && !traj.truncation_leak) {
      traj.truncation_leak = true;
      traj.first_leak_kick = r.kick_index;
    }
    traj.records.push_back(r);
    if (wants_marginal(psi.kick_index())) {
      traj.marginals.push_back({psi.kick_index(), momentum_marginal(psi, Particle::One, params.hbar_eff)});
    }
  };

  record(1.0);
  const int tolerance = params.lattice_size / 8;
  for (long t = 1; t <= last; ++t) {
    const double factor = engine.step(psi);
    record(factor);
    if (options.recenter && recenter_window(psi, tolerance) != 0) ++traj.window_shifts;
  }
  return traj;
}

SingleRotorEvolution evolve_single_rotor(const SimParams& params, int kicks) {
  check_lattice(params);
  check_gain(params);
  const int m = params.lattice_size;
  std::vector<Complex> kick(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    kick[k] = std::exp(-kI * potential(params, 2.0 * std::numbers::pi * k / m) / params.hbar_eff) /
              static_cast<double>(m);
  }
  const auto free = free_phases(m, 0, params.hbar_eff);
  const detail::RowFft fft(m, 1);

  SingleRotorEvolution out;
  AmplitudeBuffer psi(static_cast<std::size_t>(m), Complex{0.0, 0.0});
  psi[0] = 1.0;
  double log_norm = 0.0;
  out.states.emplace_back(psi.begin(), psi.end());
  out.log_norms.push_back(log_norm);
  for (int t = 1; t <= kicks; ++t) {
    fft.backward(psi.data());
    for (int k = 0; k < m; ++k) psi[k] *= kick[k];
    fft.forward(psi.data());
    double n = 0.0;
    for (int i = 0; i < m; ++i) {
      psi[i] *= free[i];
      n += std::norm(psi[i]);
    }
    if (!(n > 0.0) || !std::isfinite(n)) throw ZeroNorm("single-rotor norm degenerate");
    const double s = 1.0 / std::sqrt(n);
    for (auto& c : psi) c *= s;
    log_norm += std::log(n);
    out.states.emplace_back(psi.begin(), psi.end());
    out.log_norms.push_back(log_norm);
  }
  return out;
}

}  // namespace ptkr
