#pragma once

namespace ptkr {

/// Physical constants and lattice controls for two coupled kicked rotors
/// with the complex kick V(theta) = K [cos(theta) + i lambda sin(theta)]
/// and the kicked coupling epsilon cos(theta1 - theta2).
struct SimParams {
  double kick_strength = 5.0;  // K
  double lambda = 0.01;        // amplitude of the imaginary part of V
  double epsilon = 0.0;        // inter-rotor coupling
  double hbar_eff = 1.0;
  int lattice_size = 512;      // momentum modes per rotor, m in [-M/2, M/2)
  int n_kicks = 1000;
};

/// Structural checks the engine needs: finite constants, hbar_eff > 0,
/// an even lattice of at least 8 modes, nonnegative kick count.
/// Negative lambda/epsilon pass here so the parity relation can be probed.
void check_lattice(const SimParams& params);

/// Full user-facing validation: check_lattice plus lambda >= 0,
/// epsilon >= 0 and n_kicks >= 1.
void validate(const SimParams& params);

}  // namespace ptkr
