#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <span>
#include <vector>

#include "ptkr/params.hpp"

namespace ptkr {

using Complex = std::complex<double>;

/// 64-byte aligned storage so FFT plans made on one buffer can execute on any
/// other buffer of the same shape.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    std::size_t bytes = (n * sizeof(T) + alignment - 1) / alignment * alignment;
    if (void* p = std::aligned_alloc(alignment, bytes)) return static_cast<T*>(p);
    throw std::bad_alloc();
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using AmplitudeBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

/// Two-rotor state psi_{m,n} on the truncated momentum lattice.
///
/// Storage is row-major M x M in FFT order: slot i along either axis holds
/// the momentum index offset() + j, with j = i for i < M/2 and j = i - M
/// otherwise. offset() is zero unless the engine recenters the window on a
/// drifting wavepacket; the same offset applies to both rotors.
///
/// Amplitudes are kept normalized between kicks; log_norm() accumulates the
/// logarithm of every norm factor divided out, so the physical norm is
/// exp(log_norm()).
class WaveFunction {
 public:
  explicit WaveFunction(int lattice_size);

  int lattice_size() const noexcept { return size_; }

  std::span<Complex> amplitudes() noexcept { return amps_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }

  Complex& slot(int i1, int i2) { return amps_[static_cast<std::size_t>(i1) * size_ + i2]; }
  const Complex& slot(int i1, int i2) const {
    return amps_[static_cast<std::size_t>(i1) * size_ + i2];
  }

  /// Amplitude by absolute momentum indices; std::out_of_range outside the window.
  Complex& at(long m, long n) { return slot(slot_of(m), slot_of(n)); }
  const Complex& at(long m, long n) const { return slot(slot_of(m), slot_of(n)); }

  long offset() const noexcept { return offset_; }
  long momentum_index(int slot) const noexcept {
    return offset_ + (slot < size_ / 2 ? slot : slot - size_);
  }
  int slot_of(long m) const;
  /// Smallest momentum index in the window, offset() - M/2.
  long lowest_index() const noexcept { return offset_ - size_ / 2; }

  double log_norm() const noexcept { return log_norm_; }
  void set_log_norm(double v) noexcept { log_norm_ = v; }
  long kick_index() const noexcept { return kick_index_; }
  void set_kick_index(long t) noexcept { kick_index_ = t; }

  /// Moves the window centre by `shift` momentum units. Amplitudes keep their
  /// momentum labels; whatever falls off one edge re-enters on the other,
  /// which is exact for the periodic lattice and harmless when the edge ring
  /// carries negligible probability.
  void shift_window(long shift);

 private:
  int size_;
  long offset_ = 0;
  AmplitudeBuffer amps_;
  double log_norm_ = 0.0;
  long kick_index_ = 0;
};

/// |phi_0, phi_0>: psi_{0,0} = 1, everything else zero.
WaveFunction ground_product_state(const SimParams& params);

/// Sum of |psi_{m,n}|^2 over the stored amplitudes.
double norm(const WaveFunction& state);

/// Divides the amplitudes by sqrt(N), adds ln N to log_norm and returns N.
/// Throws ZeroNorm if N is zero or not finite.
double normalize(WaveFunction& state);

/// Fraction of the probability on the outermost ring of the window
/// (relative index |j| >= M/2 - 1 on either axis).
double edge_leakage(const WaveFunction& state);

}  // namespace ptkr
