#pragma once

#include <memory>
#include <vector>

#include "ptkr/lattice.hpp"
#include "ptkr/params.hpp"
#include "ptkr/trajectory.hpp"

namespace ptkr {

/// Diagonal factors of the two halves of one Floquet period.
///
/// kick_factor is tabulated on the angle grid theta_k = 2 pi k / M (row index
/// k1 for rotor 1) and equals
///   exp{-(i/hbar) [V(theta1) + V(theta2) + epsilon cos(theta1 - theta2)]}.
/// The free factor exp{-i hbar (m^2 + n^2) / 2} is a product of one phase per
/// rotor, so only the per-rotor phases are stored (storage slot order, zero
/// window offset).
struct KickPhaseTable {
  int lattice_size = 0;
  double hbar_eff = 1.0;
  std::vector<Complex> kick_factor;
  std::vector<Complex> free_phase;

  const Complex& kick(int k1, int k2) const {
    return kick_factor[static_cast<std::size_t>(k1) * lattice_size + k2];
  }
  Complex free_factor(int i1, int i2) const { return free_phase[i1] * free_phase[i2]; }
};

KickPhaseTable build_tables(const SimParams& params);

/// Which observables evolve() records beyond the per-kick moments and norm.
struct ObservableSchedule {
  int entropy_every = 5;              // 0 disables; t = 0 and the final kick are always included
  std::vector<long> marginal_kicks;   // kicks at which rotor-1 momentum distributions are stored
};

struct EvolveOptions {
  ObservableSchedule schedule;
  double leak_threshold = 1e-8;
  /// Follow a drifting wavepacket by moving the lattice window whenever the
  /// rotor-1 centre strays more than M/8 from the middle.
  bool recenter = false;
};

/// One Floquet period U = U_f U_K via a single 2D FFT pair per kick.
///
/// Plans are created once per engine; step() is const and may be called from
/// one thread per engine instance. Engines on different threads are fine.
class FloquetEngine {
 public:
  explicit FloquetEngine(const SimParams& params);
  ~FloquetEngine();
  FloquetEngine(FloquetEngine&&) noexcept;
  FloquetEngine& operator=(FloquetEngine&&) noexcept;
  FloquetEngine(const FloquetEngine&) = delete;
  FloquetEngine& operator=(const FloquetEngine&) = delete;

  const SimParams& params() const noexcept { return params_; }
  const KickPhaseTable& tables() const noexcept { return tables_; }

  /// Momentum -> angle, multiply by kick_factor, angle -> momentum.
  void apply_kick(WaveFunction& state) const;
  /// Multiplies by the kinetic phase of each absolute momentum.
  void apply_free(WaveFunction& state) const;
  /// Kick, free flight, renormalize; returns the norm factor of this period
  /// and advances kick_index.
  double step(WaveFunction& state) const;

 private:
  struct Transform;
  SimParams params_;
  KickPhaseTable tables_;
  std::unique_ptr<Transform> fft_;
};

/// Moves the window so its centre sits on the rotor-1 mean momentum when
/// that mean lies more than `tolerance` slots away. Returns the shift.
long recenter_window(WaveFunction& state, int tolerance);

/// Evolves the ground product state for params.n_kicks periods.
/// Throws ZeroNorm if the state decays away; a tripped leakage guard is
/// only flagged in the record.
TrajectoryRecord evolve(const SimParams& params, const EvolveOptions& options = {});

/// One uncoupled rotor under the same kick and free flight, starting from
/// |phi_0>. Element t holds the normalized amplitudes (FFT slot order) after
/// t kicks; log_norms[t] the accumulated log norm.
struct SingleRotorEvolution {
  std::vector<std::vector<Complex>> states;
  std::vector<double> log_norms;
};
SingleRotorEvolution evolve_single_rotor(const SimParams& params, int kicks);

}  // namespace ptkr
