#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace transportq {

using cplx = std::complex<double>;

/// Dense complex matrix, column-major.
///
/// This is the finite-dimensional stand-in for the operator algebra. Algebra
/// elements are square; state columns of a Hilbert section are stored as
/// n x 1 matrices of the same type. Column-major storage makes `data()` equal
/// to the column-stacked vector vec(a) used by superoperators.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Square zero matrix.
  explicit ComplexMatrix(std::size_t n) : ComplexMatrix(n, n) {}
  /// Column-major data; throws on size mismatch or non-finite entries.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> column_major);

  /// Row-major nested initializer, e.g. {{0, 1}, {1, 0}}.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  static ComplexMatrix from_rows(const std::vector<std::vector<cplx>>& rows);
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix column(std::span<const cplx> values);
  static ComplexMatrix column(std::initializer_list<cplx> values);
  static ComplexMatrix diagonal(std::span<const cplx> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  /// Dimension of a square matrix; throws otherwise.
  std::size_t dim() const;

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx scale) noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx scale);
ComplexMatrix operator*(cplx scale, ComplexMatrix a);
/// Matrix product; dispatches to the parallel kernel above a size threshold.
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& a);
/// ab - ba. Throws Errc::dimension unless both are square of equal size.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
/// Largest singular value.
double operator_norm(const ComplexMatrix& a);
/// Max absolute column sum.
double one_norm(const ComplexMatrix& a);
/// Largest absolute entry.
double max_abs(const ComplexMatrix& a);
/// Matrix exponential by scaling and squaring with diagonal Pade approximants.
ComplexMatrix matrix_exp(const ComplexMatrix& a);
/// |‖a*a‖ - ‖a‖²| / max(1, ‖a‖²).
double check_cstar_identity(const ComplexMatrix& a);

/// <x, y> = sum conj(x_i) y_i over all entries.
cplx inner_product(const ComplexMatrix& x, const ComplexMatrix& y);
/// Euclidean (Frobenius) norm of the entries; equals the vector 2-norm for columns.
double frobenius_norm(const ComplexMatrix& a);

/// Self-adjoint matrix. Construction checks the hermiticity tolerance.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(ComplexMatrix m);
  static HermitianMatrix zero(std::size_t n);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.rows(); }

  friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

 private:
  ComplexMatrix m_;
};

/// Location and size of the largest violation of m = m*. Indices satisfy row >= col.
struct HermiticityDefect {
  std::size_t row = 0;
  std::size_t col = 0;
  double deviation = 0.0;
};
HermiticityDefect hermiticity_defect(const ComplexMatrix& m);

/// Unitary matrix. Construction checks ‖U*U - I‖ against the unitarity tolerance.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix m);
  static UnitaryMatrix identity(std::size_t n);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.rows(); }

  friend bool operator==(const UnitaryMatrix&, const UnitaryMatrix&) = default;

 private:
  ComplexMatrix m_;
};

/// ‖U*U - I‖ in operator norm.
double unitarity_defect(const ComplexMatrix& u);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace transportq
