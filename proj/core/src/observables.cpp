#include "ptkr/observables.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ptkr {
namespace {

// Per-slot marginal weights (unnormalized) along one axis, in storage order.
std::vector<double> slot_weights(const WaveFunction& state, Particle particle) {
  const int m = state.lattice_size();
  std::vector<double> w(static_cast<std::size_t>(m), 0.0);
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) {
      const double p = std::norm(state.slot(i1, i2));
      w[static_cast<std::size_t>(particle == Particle::One ? i1 : i2)] += p;
    }
  }
  return w;
}

// Indices whose weights sum to more than `budget` once the lightest ones are
// dropped, returned in ascending order.
std::vector<int> significant_slots(const std::vector<double>& w, double budget) {
  std::vector<int> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return w[a] < w[b]; });
  double dropped = 0.0;
  std::size_t first_kept = 0;
  while (first_kept < order.size() && dropped + w[order[first_kept]] <= budget) {
    dropped += w[order[first_kept]];
    ++first_kept;
  }
  std::vector<int> kept(order.begin() + static_cast<long>(first_kept), order.end());
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

MomentumDistribution momentum_marginal(const WaveFunction& state, Particle particle,
                                       double hbar_eff) {
  const int m = state.lattice_size();
  const auto w = slot_weights(state, particle);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  MomentumDistribution dist;
  dist.first_index = state.lowest_index();
  dist.hbar_eff = hbar_eff;
  dist.prob.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const int j = k - m / 2;
    const int slot = j >= 0 ? j : j + m;
    dist.prob[static_cast<std::size_t>(k)] = total > 0.0 ? w[static_cast<std::size_t>(slot)] / total : 0.0;
  }
  return dist;
}

double momentum_moment(const MomentumDistribution& dist, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("moment order must be 1 or 2");
  double acc = 0.0;
  for (std::size_t k = 0; k < dist.prob.size(); ++k) {
    const double p = dist.momentum(k);
    acc += (order == 1 ? p : p * p) * dist.prob[k];
  }
  return acc;
}

double momentum_moment(const WaveFunction& state, Particle particle, int order, double hbar_eff) {
  return momentum_moment(momentum_marginal(state, particle, hbar_eff), order);
}

double linear_entropy(const WaveFunction& state) {
  const auto rows_w = slot_weights(state, Particle::One);
  const auto cols_w = slot_weights(state, Particle::Two);
  const double total = std::accumulate(rows_w.begin(), rows_w.end(), 0.0);
  if (!(total > 0.0)) return 0.0;

  const double budget = 1e-16 * total;
  const auto rows = significant_slots(rows_w, budget);
  const auto cols = significant_slots(cols_w, budget);

  Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = state.slot(rows[r], cols[c]);
    }
  }

  // Only the lower triangle of the Hermitian Gram matrix is formed.
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(a.rows(), a.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(a);

  double purity = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j) {
    purity += std::norm(gram(j, j));
    for (Eigen::Index i = j + 1; i < gram.rows(); ++i) purity += 2.0 * std::norm(gram(i, j));
  }
  purity /= total * total;
  return std::max(0.0, 1.0 - purity);  // round-off can push a product state below zero
}

}  // namespace ptkr
