#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ptkr/lattice.hpp"
#include "ptkr/params.hpp"
#include "ptkr/trajectory.hpp"

namespace ptkr::oracle {

inline constexpr int kMaxDenseLattice = 32;

/// Explicit (M^2 x M^2) one-period operator on the flattened basis
/// |m, n> -> (m + M/2) * M + (n + M/2), m, n in [-M/2, M/2).
struct DenseFloquet {
  Eigen::MatrixXcd matrix;
  SimParams params;
};

/// Unitary angle <- momentum matrix of one rotor: F(k, a) = exp(i m_a theta_k) / sqrt(M).
Eigen::MatrixXcd angle_transform(int lattice_size);

/// U = U_f U_K with U_K = (F x F)^dagger diag(kick) (F x F) summed explicitly.
/// Throws LatticeTooLarge above kMaxDenseLattice.
DenseFloquet build_dense(const SimParams& params);

Eigen::VectorXcd to_dense(const WaveFunction& state);
WaveFunction from_dense(const Eigen::VectorXcd& v, int lattice_size);

/// rho_1 = Tr_2 |psi><psi| / <psi|psi>, indexed by (m + M/2).
Eigen::MatrixXcd reduced_density_matrix(const Eigen::VectorXcd& v, int lattice_size);

/// Observables from rho_1: <p1> = Tr(rho_1 p), <p1^2> = Tr(rho_1 p^2), S = 1 - Tr(rho_1^2).
ObservableRecord dense_observables(const Eigen::VectorXcd& v, const SimParams& params);

/// Repeated matrix-vector products from |0, 0> with the engine's per-kick
/// renormalization. Entropy is recorded at every kick. When `states` is
/// non-null it receives the normalized state after every kick (t = 0 first).
TrajectoryRecord dense_evolve(const DenseFloquet& dense, int kicks,
                              std::vector<Eigen::VectorXcd>* states = nullptr);

}  // namespace ptkr::oracle
