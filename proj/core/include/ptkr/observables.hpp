#pragma once

#include <cstddef>
#include <vector>

#include "ptkr/lattice.hpp"

namespace ptkr {

enum class Particle { One = 1, Two = 2 };

/// Diagonal of a reduced density matrix in the momentum basis, ordered by
/// ascending momentum index starting at first_index.
struct MomentumDistribution {
  long first_index = 0;
  double hbar_eff = 1.0;
  std::vector<double> prob;

  long index(std::size_t k) const noexcept { return first_index + static_cast<long>(k); }
  double momentum(std::size_t k) const noexcept { return hbar_eff * static_cast<double>(index(k)); }
};

/// P(m) = sum_n |psi_{m,n}|^2 / N for rotor 1 (or the column sums for rotor 2).
MomentumDistribution momentum_marginal(const WaveFunction& state, Particle particle,
                                       double hbar_eff);

/// sum_m (m hbar)^order P(m) for order 1 or 2.
double momentum_moment(const WaveFunction& state, Particle particle, int order, double hbar_eff);
double momentum_moment(const MomentumDistribution& dist, int order);

/// S = 1 - Tr(rho_1^2) = 1 - ||A A^dagger||_F^2 / N^2 with A_{mn} = psi_{m,n}.
///
/// Rows and columns whose marginal weight sums to at most 1e-16 are left out
/// of the Gram product; the omitted part changes S by less than 4e-16.
double linear_entropy(const WaveFunction& state);

}  // namespace ptkr
