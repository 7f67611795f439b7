#pragma once

#include <cstdint>

#include "transportq/algebra.h"

namespace transportq {

/// Counter-based SplitMix64 stream: draw k of stream `seed` is a pure function
/// of (seed, k), so sequences are reproducible across platforms and threads.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal by Box-Muller (no cached second variate).
  double normal() noexcept;
  /// Standard complex normal: E|z|^2 = 1.
  cplx complex_normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

/// Entries i.i.d. standard complex normal.
ComplexMatrix random_matrix(CounterRng& rng, std::size_t rows, std::size_t cols);
/// (M + M*)/2 of a random_matrix; exactly self-adjoint.
HermitianMatrix random_hermitian(CounterRng& rng, std::size_t n);
/// Random complex column normalised to unit length.
ComplexMatrix random_state(CounterRng& rng, std::size_t n);

}  // namespace transportq
