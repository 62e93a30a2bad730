#pragma once

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <utility>

#include "ptkr/lattice.hpp"

namespace ptkr::detail {

// The FFTW planner is not thread-safe; execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

inline fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

/// In-place square transpose, cache blocked.
inline void transpose_square(Complex* a, int n) {
  constexpr int kBlock = 32;
  for (int ib = 0; ib < n; ib += kBlock) {
    const int ie = std::min(ib + kBlock, n);
    for (int jb = ib; jb < n; jb += kBlock) {
      const int je = std::min(jb + kBlock, n);
      for (int i = ib; i < ie; ++i) {
        for (int j = (ib == jb ? i + 1 : jb); j < je; ++j) {
          std::swap(a[static_cast<std::size_t>(i) * n + j], a[static_cast<std::size_t>(j) * n + i]);
        }
      }
    }
  }
}

/// Batched in-place 1D transforms over `rows` contiguous rows of length n,
/// in both directions. Plans use FFTW_ESTIMATE so the algorithm, and hence
/// every rounding, is the same in every process.
class RowFft {
 public:
  RowFft(int n, int rows) {
    AmplitudeBuffer scratch(static_cast<std::size_t>(n) * rows);
    auto* buf = as_fftw(scratch.data());
    std::lock_guard lock(fftw_planner_mutex());
    backward_ = fftw_plan_many_dft(1, &n, rows, buf, nullptr, 1, n, buf, nullptr, 1, n,
                                   FFTW_BACKWARD, FFTW_ESTIMATE);
    forward_ = fftw_plan_many_dft(1, &n, rows, buf, nullptr, 1, n, buf, nullptr, 1, n,
                                  FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~RowFft() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(backward_);
    fftw_destroy_plan(forward_);
  }
  RowFft(const RowFft&) = delete;
  RowFft& operator=(const RowFft&) = delete;

  // sum_j x_j exp(+2 pi i j k / n)
  void backward(Complex* data) const { fftw_execute_dft(backward_, as_fftw(data), as_fftw(data)); }
  // sum_k x_k exp(-2 pi i j k / n)
  void forward(Complex* data) const { fftw_execute_dft(forward_, as_fftw(data), as_fftw(data)); }

 private:
  fftw_plan backward_ = nullptr;
  fftw_plan forward_ = nullptr;
};

/// Momentum <-> angle transform of an n x n state.
///
/// to_angle leaves the angle-space array TRANSPOSED (row index = rotor-2
/// angle); to_momentum expects that layout and restores the row-major
/// momentum layout. Callers multiplying by a symmetric angle-space factor
/// never see the difference.
class Transform2D {
 public:
  explicit Transform2D(int n) : n_(n), rows_(n, n) {}

  void to_angle(Complex* data) const {
    rows_.backward(data);
    transpose_square(data, n_);
    rows_.backward(data);
  }
  void to_momentum(Complex* data) const {
    rows_.forward(data);
    transpose_square(data, n_);
    rows_.forward(data);
  }

 private:
  int n_;
  RowFft rows_;
};

}  // namespace ptkr::detail
