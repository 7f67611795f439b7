#pragma once

#include "transportq/algebra.h"

namespace transportq {

/// Inner derivation a -> i[H, a] with Hermitian generator H.
class InnerDerivation {
 public:
  explicit InnerDerivation(HermitianMatrix generator) : generator_(std::move(generator)) {}

  const HermitianMatrix& generator() const noexcept { return generator_; }
  std::size_t dim() const noexcept { return generator_.dim(); }

 private:
  HermitianMatrix generator_;
};

/// Linear map on n x n matrices as an n^2 x n^2 matrix acting on vec(a)
/// (columns stacked).
class Superoperator {
 public:
  Superoperator(std::size_t dim, ComplexMatrix entries);

  std::size_t dim() const noexcept { return dim_; }
  const ComplexMatrix& entries() const noexcept { return entries_; }

  /// unvec(S * vec(a)).
  ComplexMatrix apply(const ComplexMatrix& a) const;

 private:
  std::size_t dim_;
  ComplexMatrix entries_;
};

/// Column-stacked n^2 x 1 vector of a square matrix.
ComplexMatrix vec(const ComplexMatrix& a);
/// Inverse of vec for an n^2 x 1 column.
ComplexMatrix unvec(const ComplexMatrix& v, std::size_t n);

/// i(Ha - aH).
ComplexMatrix apply_derivation(const InnerDerivation& d, const ComplexMatrix& a);

/// ‖δ(ab) - δ(a)b - aδ(b)‖ / max(1, ‖a‖‖b‖).
double check_leibniz(const InnerDerivation& d, const ComplexMatrix& a, const ComplexMatrix& b);

/// ‖δ(a*) - δ(a)*‖ / max(1, ‖a‖).
double check_star_compatibility(const InnerDerivation& d, const ComplexMatrix& a);

/// S with S vec(a) = vec(i[H, a]); S = i(I ⊗ H - Hᵀ ⊗ I) for column stacking.
Superoperator derivation_superoperator(const InnerDerivation& d);

/// e^{irH} a e^{-irH}.
ComplexMatrix one_parameter_group(const InnerDerivation& d, double r, const ComplexMatrix& a);

/// ‖unvec(exp(rS) vec(a)) - one_parameter_group(d, r, a)‖ / max(1, ‖a‖).
double check_group_vs_superoperator(const InnerDerivation& d, double r, const ComplexMatrix& a);

/// Kronecker product, (a ⊗ b)(i p + k, j q + l) = a(i, j) b(k, l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace transportq
