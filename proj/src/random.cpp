#include "transportq/random.h"

#include <cmath>
#include <numbers>

namespace transportq {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finaliser.
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() noexcept {
  const std::uint64_t key = mix(seed_ + kGolden);
  return mix(key + (++counter_) * kGolden);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx CounterRng::complex_normal() noexcept {
  const double re = normal();
  const double im = normal();
  return cplx{re, im} * std::numbers::sqrt2 * 0.5;
}

ComplexMatrix random_matrix(CounterRng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (auto& z : m.data()) z = rng.complex_normal();
  return m;
}

HermitianMatrix random_hermitian(CounterRng& rng, std::size_t n) {
  const ComplexMatrix m = random_matrix(rng, n, n);
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = m(i, i).real();
    for (std::size_t j = 0; j < i; ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return HermitianMatrix(std::move(h));
}

ComplexMatrix random_state(CounterRng& rng, std::size_t n) {
  ComplexMatrix y = random_matrix(rng, n, 1);
  y *= 1.0 / frobenius_norm(y);
  return y;
}

}  // namespace transportq
