#include "ptkr/dense_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ptkr/errors.hpp"

namespace ptkr::oracle {
namespace {

long momentum_of(int a, int m) { return static_cast<long>(a) - m / 2; }

}  // namespace

Eigen::MatrixXcd angle_transform(int m) {
  Eigen::MatrixXcd f(m, m);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  for (int k = 0; k < m; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / m;
    for (int a = 0; a < m; ++a) f(k, a) = std::polar(norm, static_cast<double>(momentum_of(a, m)) * theta);
  }
  return f;
}

DenseFloquet build_dense(const SimParams& p) {
  check_lattice(p);
  const int m = p.lattice_size;
  if (m > kMaxDenseLattice) {
    throw LatticeTooLarge("dense oracle limited to M <= " + std::to_string(kMaxDenseLattice) + ", got " +
                          std::to_string(m));
  }
  const int dim = m * m;
  const Eigen::MatrixXcd f = angle_transform(m);

  // Two-rotor transform (F x F): row (k1, k2), column (a, b).
  Eigen::MatrixXcd f2(dim, dim);
  for (int k1 = 0; k1 < m; ++k1)
    for (int k2 = 0; k2 < m; ++k2)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) f2(k1 * m + k2, a * m + b) = f(k1, a) * f(k2, b);

  // Kick potential summed term by term on the angle grid.
  const std::complex<double> i_unit{0.0, 1.0};
  Eigen::VectorXcd kick(dim);
  for (int k1 = 0; k1 < m; ++k1) {
    const double t1 = 2.0 * std::numbers::pi * k1 / m;
    for (int k2 = 0; k2 < m; ++k2) {
      const double t2 = 2.0 * std::numbers::pi * k2 / m;
      const std::complex<double> v1 = p.kick_strength * std::cos(t1) + i_unit * p.kick_strength * p.lambda * std::sin(t1);
      const std::complex<double> v2 = p.kick_strength * std::cos(t2) + i_unit * p.kick_strength * p.lambda * std::sin(t2);
      const std::complex<double> coupling = p.epsilon * std::cos(t1 - t2);
      kick(k1 * m + k2) = std::exp(-(i_unit / p.hbar_eff) * (v1 + v2 + coupling));
    }
  }

  const Eigen::MatrixXcd u_kick = f2.adjoint() * (kick.asDiagonal() * f2);

  Eigen::VectorXcd free(dim);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const double mm = static_cast<double>(momentum_of(a, m));
      const double nn = static_cast<double>(momentum_of(b, m));
      free(a * m + b) = std::exp(-i_unit * p.hbar_eff * (mm * mm + nn * nn) / 2.0);
    }
  }
  return {free.asDiagonal() * u_kick, p};
}

Eigen::VectorXcd to_dense(const WaveFunction& state) {
  if (state.offset() != 0) throw DimensionMismatch("dense oracle needs an unshifted lattice window");
  const int m = state.lattice_size();
  Eigen::VectorXcd v(m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) v(a * m + b) = state.at(momentum_of(a, m), momentum_of(b, m));
  return v;
}

WaveFunction from_dense(const Eigen::VectorXcd& v, int m) {
  if (v.size() != static_cast<Eigen::Index>(m) * m) throw DimensionMismatch("dense vector size != M^2");
  WaveFunction w(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) w.at(momentum_of(a, m), momentum_of(b, m)) = v(a * m + b);
  return w;
}

Eigen::MatrixXcd reduced_density_matrix(const Eigen::VectorXcd& v, int m) {
  if (v.size() != static_cast<Eigen::Index>(m) * m) throw DimensionMismatch("dense vector size != M^2");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int a2 = 0; a2 < m; ++a2)
      for (int b = 0; b < m; ++b) rho(a, a2) += v(a * m + b) * std::conj(v(a2 * m + b));
  return rho / v.squaredNorm();
}

ObservableRecord dense_observables(const Eigen::VectorXcd& v, const SimParams& p) {
  const int m = p.lattice_size;
  const Eigen::MatrixXcd rho = reduced_density_matrix(v, m);
  Eigen::VectorXd momentum(m);
  for (int a = 0; a < m; ++a) momentum(a) = p.hbar_eff * static_cast<double>(momentum_of(a, m));

  const Eigen::MatrixXcd pmat = momentum.cast<std::complex<double>>().asDiagonal();
  ObservableRecord r;
  r.p1_mean = (rho * pmat).trace().real();
  r.p1_sq_mean = (rho * pmat * pmat).trace().real();
  r.variance = r.p1_sq_mean - r.p1_mean * r.p1_mean;
  r.linear_entropy = 1.0 - (rho * rho).trace().real();

  const double total = v.squaredNorm();
  double edge = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const long mm = std::abs(momentum_of(a, m)), nn = std::abs(momentum_of(b, m));
      if (mm >= m / 2 - 1 || nn >= m / 2 - 1) edge += std::norm(v(a * m + b));
    }
  }
  r.edge_probability = edge / total;
  return r;
}

TrajectoryRecord dense_evolve(const DenseFloquet& dense, int kicks, std::vector<Eigen::VectorXcd>* states) {
  const int m = dense.params.lattice_size;
  TrajectoryRecord traj;
  traj.params = dense.params;
  traj.params.n_kicks = kicks;

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m) * m);
  psi(static_cast<Eigen::Index>(m / 2) * m + m / 2) = 1.0;
  double log_norm = 0.0;

  auto push = [&](long t, double factor) {
    ObservableRecord r = dense_observables(psi, dense.params);
    r.kick_index = t;
    r.norm_factor = factor;
    r.log_norm = log_norm;
    r.norm_total = std::exp(log_norm);
    r.leak_flag = r.edge_probability > traj.leak_threshold;
    traj.max_edge_probability = std::max(traj.max_edge_probability, r.edge_probability);
    if (r.leak_flag && !traj.truncation_leak) {
      traj.truncation_leak = true;
      traj.first_leak_kick = t;
    }
    traj.records.push_back(r);
    if (states) states->push_back(psi);
  };

  push(0, 1.0);
  for (int t = 1; t <= kicks; ++t) {
    psi = dense.matrix * psi;
    const double n = psi.squaredNorm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ZeroNorm("dense evolution norm degenerate");
    psi /= std::sqrt(n);
    log_norm += std::log(n);
    push(t, n);
  }
  return traj;
}

}  // namespace ptkr::oracle
