#pragma once

#include <string>
#include <vector>

#include "transportq/algebra.h"

namespace transportq {

/// Real polynomial c0 + c1 t + c2 t^2 + ...
struct Polynomial {
  std::vector<double> coefficients;

  double operator()(double t) const noexcept;
  /// Antiderivative vanishing at 0.
  Polynomial integral() const;
  Polynomial derivative() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

/// One term f(t) P of a pauli_sum path.
struct PathTerm {
  Polynomial coefficient;
  HermitianMatrix matrix;

  friend bool operator==(const PathTerm&, const PathTerm&) = default;
};

/// Time-dependent Hermitian generator t -> H(t). The transport generator is
/// sign * i * H(t).
class HamiltonianPath {
 public:
  enum class Kind { constant, scalar, pauli_sum, sampled };

  /// H(t) = H0.
  static HamiltonianPath constant(HermitianMatrix h0, int sign = +1);
  /// H(t) = f(t) H0.
  static HamiltonianPath scalar(Polynomial f, HermitianMatrix h0, int sign = +1);
  /// H(t) = sum_k f_k(t) P_k.
  static HamiltonianPath pauli_sum(std::vector<PathTerm> terms, int sign = +1);
  /// Piecewise linear interpolation of samples on a strictly increasing grid.
  static HamiltonianPath sampled(std::vector<double> times, std::vector<HermitianMatrix> samples, int sign = +1);

  Kind kind() const noexcept { return kind_; }
  int sign() const noexcept { return sign_; }
  std::size_t dim() const noexcept { return dim_; }

  /// Generator terms; constant and scalar paths expose their single term.
  const std::vector<PathTerm>& terms() const noexcept { return terms_; }
  const std::vector<double>& sample_times() const noexcept { return times_; }
  const std::vector<HermitianMatrix>& samples() const noexcept { return samples_; }

  /// Closed domain of definition; unbounded for analytic kinds.
  double domain_begin() const noexcept;
  double domain_end() const noexcept;
  bool contains(double t) const noexcept;

  /// H(t). Throws Errc::domain outside the domain.
  HermitianMatrix at(double t) const;
  /// sign * i * H(t).
  ComplexMatrix generator(double t) const;

  /// True when all H(t) commute with each other (checked on the defining data).
  bool is_commuting() const;
  /// Exact ∫_{t0}^{t1} H(t) dt (polynomial or piecewise-linear integrand).
  ComplexMatrix integrated(double t0, double t1) const;

  /// Same path with the opposite sign convention.
  HamiltonianPath with_sign(int sign) const;

  friend bool operator==(const HamiltonianPath&, const HamiltonianPath&) = default;

 private:
  HamiltonianPath(Kind kind, int sign, std::size_t dim) : kind_(kind), sign_(sign), dim_(dim) {}

  Kind kind_;
  int sign_;
  std::size_t dim_;
  std::vector<PathTerm> terms_;
  std::vector<double> times_;
  std::vector<HermitianMatrix> samples_;
};

std::string to_string(HamiltonianPath::Kind kind);

}  // namespace transportq
