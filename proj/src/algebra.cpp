#include "transportq/algebra.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "transportq/errors.h"
#include "transportq/kernels.h"
#include "transportq/tolerances.h"

namespace transportq {

namespace {

using EigenMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
using ConstEigenMap = Eigen::Map<const EigenMatrix>;

ConstEigenMap as_eigen(const ComplexMatrix& a) {
  return ConstEigenMap(a.data().data(), static_cast<Eigen::Index>(a.rows()),
                       static_cast<Eigen::Index>(a.cols()));
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw dimension_error(std::string(op) + ": shape " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
  }
}

void require_square_pair(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw dimension_error(std::string(op) + ": operands must be square of equal dimension, got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " and " +
                          std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
  if (data_.size() != rows * cols) {
    throw dimension_error("ComplexMatrix: " + std::to_string(data_.size()) +
                          " entries for shape " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!all_finite()) throw domain_error("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  std::vector<std::vector<cplx>> nested;
  for (const auto& r : rows) nested.emplace_back(r);
  return from_rows(nested);
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cplx>>& rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.front().size();
  ComplexMatrix m(n_rows, n_cols);
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (rows[i].size() != n_cols) {
      throw dimension_error("ComplexMatrix::from_rows: ragged row " + std::to_string(i));
    }
    for (std::size_t j = 0; j < n_cols; ++j) m(i, j) = rows[i][j];
  }
  if (!m.all_finite()) throw domain_error("ComplexMatrix: non-finite entry");
  return m;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> values) {
  return ComplexMatrix(values.size(), 1, std::vector<cplx>(values.begin(), values.end()));
}

ComplexMatrix ComplexMatrix::column(std::initializer_list<cplx> values) {
  return column(std::span<const cplx>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  if (!m.all_finite()) throw domain_error("ComplexMatrix: non-finite entry");
  return m;
}

std::size_t ComplexMatrix::dim() const {
  if (!is_square()) {
    throw dimension_error("expected a square matrix, got " + std::to_string(rows_) + "x" +
                          std::to_string(cols_));
  }
  return rows_;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) noexcept {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(ComplexMatrix a, cplx scale) { return a *= scale; }
ComplexMatrix operator*(cplx scale, ComplexMatrix a) { return a *= scale; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() >= kernels::kParallelGemmDim && b.cols() >= kernels::kParallelGemmDim) {
    return kernels::gemm_parallel(a, b);
  }
  return kernels::gemm_serial(a, b);
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out(j, i) = std::conj(a(i, j));
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square_pair(a, b, "commutator");
  return a * b - b * a;
}

double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  // Jacobi SVD is accurate to a few ulps in the largest singular value.
  Eigen::JacobiSVD<EigenMatrix> svd(as_eigen(a));
  return svd.singularValues()(0);
}

double one_norm(const ComplexMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) sum += std::abs(a(i, j));
    best = std::max(best, sum);
  }
  return best;
}

double max_abs(const ComplexMatrix& a) {
  double best = 0.0;
  for (const auto& z : a.data()) best = std::max(best, std::abs(z));
  return best;
}

namespace {

// Scaling-and-squaring with [m/m] Pade approximants; degree and theta_m
// thresholds for double precision (Higham 2005).
constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                        30270240.0,    2162160.0,    110880.0,     3960.0,
                                        90.0,          1.0};
constexpr std::array<double, 14> kPade13{
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

// Numerator/denominator pair P = V + U, Q = V - U for degrees 3..9.
template <std::size_t N>
std::pair<ComplexMatrix, ComplexMatrix> pade_low(const ComplexMatrix& a, const std::array<double, N>& b) {
  const std::size_t n = a.rows();
  const ComplexMatrix a2 = a * a;
  ComplexMatrix even_sum = ComplexMatrix::identity(n) * b[0];
  ComplexMatrix odd_sum = ComplexMatrix::identity(n) * b[1];
  ComplexMatrix power = ComplexMatrix::identity(n);
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    even_sum += power * b[k];
    odd_sum += power * b[k + 1];
  }
  ComplexMatrix u = a * odd_sum;
  return {even_sum + u, even_sum - u};
}

std::pair<ComplexMatrix, ComplexMatrix> pade13(const ComplexMatrix& a) {
  const auto& b = kPade13;
  const std::size_t n = a.rows();
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  ComplexMatrix u_inner = a6 * (a6 * b[13] + a4 * b[11] + a2 * b[9]);
  u_inner += a6 * b[7] + a4 * b[5] + a2 * b[3] + id * b[1];
  ComplexMatrix u = a * u_inner;
  ComplexMatrix v = a6 * (a6 * b[12] + a4 * b[10] + a2 * b[8]);
  v += a6 * b[6] + a4 * b[4] + a2 * b[2] + id * b[0];
  return {v + u, v - u};
}

// Solves Q X = P.
ComplexMatrix solve(const ComplexMatrix& q, const ComplexMatrix& p) {
  const EigenMatrix x = as_eigen(q).partialPivLu().solve(as_eigen(p));
  ComplexMatrix out(p.rows(), p.cols());
  std::copy(x.data(), x.data() + x.size(), out.data().begin());
  return out;
}

}  // namespace

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  if (!a.all_finite()) throw domain_error("matrix_exp: non-finite entry");
  if (n == 0) return a;

  const double norm1 = one_norm(a);
  if (norm1 <= kTheta3) {
    auto [p, q] = pade_low(a, kPade3);
    return solve(q, p);
  }
  if (norm1 <= kTheta5) {
    auto [p, q] = pade_low(a, kPade5);
    return solve(q, p);
  }
  if (norm1 <= kTheta7) {
    auto [p, q] = pade_low(a, kPade7);
    return solve(q, p);
  }
  if (norm1 <= kTheta9) {
    auto [p, q] = pade_low(a, kPade9);
    return solve(q, p);
  }

  int squarings = 0;
  if (norm1 > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  const ComplexMatrix scaled = a * std::ldexp(1.0, -squarings);
  auto [p, q] = pade13(scaled);
  ComplexMatrix result = solve(q, p);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

double check_cstar_identity(const ComplexMatrix& a) {
  const double norm = operator_norm(a);
  const double norm_sq = norm * norm;
  return std::abs(operator_norm(adjoint(a) * a) - norm_sq) / std::max(1.0, norm_sq);
}

cplx inner_product(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_shape(x, y, "inner_product");
  cplx sum{0.0, 0.0};
  for (std::size_t k = 0; k < x.size(); ++k) sum += std::conj(x.data()[k]) * y.data()[k];
  return sum;
}

double frobenius_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (const auto& z : a.data()) sum += std::norm(z);
  return std::sqrt(sum);
}

HermiticityDefect hermiticity_defect(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  HermiticityDefect worst;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
      if (dev > worst.deviation) worst = {i, j, dev};
    }
  }
  return worst;
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
  const auto defect = hermiticity_defect(m_);
  if (defect.deviation == 0.0) return;
  if (defect.deviation > tol::kHermiticity * operator_norm(m_)) {
    throw domain_error("matrix is not Hermitian: entry (" + std::to_string(defect.row) + "," +
                       std::to_string(defect.col) + ") deviates from its adjoint by " +
                       sci(defect.deviation));
  }
}

HermitianMatrix HermitianMatrix::zero(std::size_t n) { return HermitianMatrix(ComplexMatrix(n)); }

double unitarity_defect(const ComplexMatrix& u) {
  const std::size_t n = u.dim();
  return operator_norm(adjoint(u) * u - ComplexMatrix::identity(n));
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.all_finite()) throw numerical_error("unitary candidate has non-finite entries");
  const double defect = unitarity_defect(m_);
  if (defect > tol::kUnitarity) {
    throw numerical_error("unitarity defect " + sci(defect) + " exceeds tolerance");
  }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t n) { return UnitaryMatrix(ComplexMatrix::identity(n)); }

namespace pauli {
ComplexMatrix x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix y() { return ComplexMatrix::from_rows({{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}); }
ComplexMatrix z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
}  // namespace pauli

}  // namespace transportq
