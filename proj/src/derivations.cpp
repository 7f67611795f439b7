#include "transportq/derivations.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "transportq/errors.h"

namespace transportq {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_dim(const InnerDerivation& d, const ComplexMatrix& a, const char* op) {
  if (!a.is_square() || a.rows() != d.dim()) {
    throw dimension_error(std::string(op) + ": derivation of dimension " + std::to_string(d.dim()) +
                          " applied to " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                          " matrix");
  }
}

}  // namespace

Superoperator::Superoperator(std::size_t dim, ComplexMatrix entries) : dim_(dim), entries_(std::move(entries)) {
  if (entries_.rows() != dim * dim || entries_.cols() != dim * dim) {
    throw dimension_error("Superoperator: entries must be " + std::to_string(dim * dim) + " square");
  }
  if (!entries_.all_finite()) throw domain_error("Superoperator: non-finite entry");
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& a) const {
  if (!a.is_square() || a.rows() != dim_) throw dimension_error("Superoperator::apply: dimension mismatch");
  return unvec(entries_ * vec(a), dim_);
}

ComplexMatrix vec(const ComplexMatrix& a) {
  const auto data = a.data();
  return ComplexMatrix(a.size(), 1, std::vector<cplx>(data.begin(), data.end()));
}

ComplexMatrix unvec(const ComplexMatrix& v, std::size_t n) {
  if (v.cols() != 1 || v.rows() != n * n) throw dimension_error("unvec: expected an n^2 x 1 column");
  const auto data = v.data();
  return ComplexMatrix(n, n, std::vector<cplx>(data.begin(), data.end()));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t p = b.rows();
  const std::size_t q = b.cols();
  ComplexMatrix out(a.rows() * p, a.cols() * q);
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t l = 0; l < q; ++l)
        for (std::size_t k = 0; k < p; ++k) out(i * p + k, j * q + l) = a(i, j) * b(k, l);
  return out;
}

ComplexMatrix apply_derivation(const InnerDerivation& d, const ComplexMatrix& a) {
  require_dim(d, a, "apply_derivation");
  return kI * commutator(d.generator().matrix(), a);
}

double check_leibniz(const InnerDerivation& d, const ComplexMatrix& a, const ComplexMatrix& b) {
  require_dim(d, a, "check_leibniz");
  require_dim(d, b, "check_leibniz");
  const ComplexMatrix lhs = apply_derivation(d, a * b);
  const ComplexMatrix rhs = apply_derivation(d, a) * b + a * apply_derivation(d, b);
  return operator_norm(lhs - rhs) / std::max(1.0, operator_norm(a) * operator_norm(b));
}

double check_star_compatibility(const InnerDerivation& d, const ComplexMatrix& a) {
  require_dim(d, a, "check_star_compatibility");
  const ComplexMatrix lhs = apply_derivation(d, adjoint(a));
  const ComplexMatrix rhs = adjoint(apply_derivation(d, a));
  return operator_norm(lhs - rhs) / std::max(1.0, operator_norm(a));
}

Superoperator derivation_superoperator(const InnerDerivation& d) {
  const std::size_t n = d.dim();
  const ComplexMatrix& h = d.generator().matrix();
  const ComplexMatrix id = ComplexMatrix::identity(n);
  ComplexMatrix hT(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) hT(i, j) = h(j, i);
  return Superoperator(n, kI * (kron(id, h) - kron(hT, id)));
}

ComplexMatrix one_parameter_group(const InnerDerivation& d, double r, const ComplexMatrix& a) {
  require_dim(d, a, "one_parameter_group");
  if (!std::isfinite(r)) throw domain_error("one_parameter_group: non-finite parameter");
  const ComplexMatrix u = matrix_exp((kI * r) * d.generator().matrix());
  return u * a * adjoint(u);
}

double check_group_vs_superoperator(const InnerDerivation& d, double r, const ComplexMatrix& a) {
  require_dim(d, a, "check_group_vs_superoperator");
  const Superoperator s = derivation_superoperator(d);
  const ComplexMatrix via_super = unvec(matrix_exp(s.entries() * cplx{r, 0.0}) * vec(a), d.dim());
  return operator_norm(via_super - one_parameter_group(d, r, a)) / std::max(1.0, operator_norm(a));
}

}  // namespace transportq
