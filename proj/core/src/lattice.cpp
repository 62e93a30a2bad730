#include "ptkr/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ptkr/errors.hpp"

namespace ptkr {

WaveFunction::WaveFunction(int lattice_size)
    : size_(lattice_size),
      amps_(static_cast<std::size_t>(lattice_size) * lattice_size, Complex{0.0, 0.0}) {
  if (lattice_size < 2 || lattice_size % 2 != 0) {
    throw ValidationError("lattice_size", "must be even and positive");
  }
}

int WaveFunction::slot_of(long m) const {
  const long j = m - offset_;
  if (j < -size_ / 2 || j >= size_ / 2) {
    throw std::out_of_range("momentum index " + std::to_string(m) + " outside lattice window");
  }
  return static_cast<int>(j >= 0 ? j : j + size_);
}

void WaveFunction::shift_window(long shift) {
  if (shift == 0) return;
  const long r = ((shift % size_) + size_) % size_;
  AmplitudeBuffer rolled(amps_.size());
  for (int i1 = 0; i1 < size_; ++i1) {
    const std::size_t src1 = static_cast<std::size_t>((i1 + r) % size_) * size_;
    const std::size_t dst1 = static_cast<std::size_t>(i1) * size_;
    for (int i2 = 0; i2 < size_; ++i2) {
      rolled[dst1 + i2] = amps_[src1 + static_cast<std::size_t>((i2 + r) % size_)];
    }
  }
  amps_.swap(rolled);
  offset_ += shift;
}

WaveFunction ground_product_state(const SimParams& params) {
  check_lattice(params);
  WaveFunction psi(params.lattice_size);
  psi.at(0, 0) = Complex{1.0, 0.0};
  return psi;
}

double norm(const WaveFunction& state) {
  // Row partial sums keep the accumulation error at the level of one row.
  const int m = state.lattice_size();
  const auto a = state.amplitudes();
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    double row = 0.0;
    const Complex* p = a.data() + static_cast<std::size_t>(i) * m;
    for (int k = 0; k < m; ++k) row += std::norm(p[k]);
    total += row;
  }
  return total;
}

double normalize(WaveFunction& state) {
  const double n = norm(state);
  if (!(n > 0.0)) throw ZeroNorm("state norm underflowed to zero");
  if (!std::isfinite(n)) throw ZeroNorm("state norm is not finite");
  const double scale = 1.0 / std::sqrt(n);
  for (auto& c : state.amplitudes()) c *= scale;
  state.set_log_norm(state.log_norm() + std::log(n));
  return n;
}

double edge_leakage(const WaveFunction& state) {
  const int m = state.lattice_size();
  const int half = m / 2;
  auto outer = [&](int i) {
    const int j = i < half ? i : i - m;
    return j >= half - 1 || j <= -(half - 1);
  };
  double edge = 0.0;
  double total = 0.0;
  for (int i1 = 0; i1 < m; ++i1) {
    const bool row_outer = outer(i1);
    for (int i2 = 0; i2 < m; ++i2) {
      const double w = std::norm(state.slot(i1, i2));
      total += w;
      if (row_outer || outer(i2)) edge += w;
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

}  // namespace ptkr
