#include "transportq/kernels.h"

#include <cstddef>

#include "transportq/errors.h"

namespace transportq::kernels {

namespace {

void check_gemm_shapes(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw dimension_error("gemm: inner dimensions " + std::to_string(a.cols()) + " and " +
                          std::to_string(b.rows()) + " differ");
  }
}

// Column j of c = a * b; k-outer loop streams through column-major a.
inline void gemm_column(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c, std::size_t j) {
  const std::size_t m = a.rows();
  cplx* out = c.data().data() + j * m;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const cplx bkj = b(k, j);
    const cplx* a_col = a.data().data() + k * m;
    for (std::size_t i = 0; i < m; ++i) out[i] += a_col[i] * bkj;
  }
}

void check_batch(std::span<const ComplexMatrix> ops, const ComplexMatrix& x) {
  for (const auto& op : ops) {
    if (op.cols() != x.rows()) throw dimension_error("batch kernel: operator/operand dimension mismatch");
  }
}

}  // namespace

ComplexMatrix gemm_serial(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_gemm_shapes(a, b);
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) gemm_column(a, b, c, j);
  return c;
}

ComplexMatrix gemm_parallel(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_gemm_shapes(a, b);
  ComplexMatrix c(a.rows(), b.cols());
  const auto n_cols = static_cast<std::ptrdiff_t>(b.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n_cols; ++j) gemm_column(a, b, c, static_cast<std::size_t>(j));
  return c;
}

std::vector<ComplexMatrix> apply_batch_serial(std::span<const ComplexMatrix> ops, const ComplexMatrix& x) {
  check_batch(ops, x);
  std::vector<ComplexMatrix> out(ops.size());
  for (std::size_t k = 0; k < ops.size(); ++k) out[k] = gemm_serial(ops[k], x);
  return out;
}

std::vector<ComplexMatrix> apply_batch_parallel(std::span<const ComplexMatrix> ops, const ComplexMatrix& x) {
  check_batch(ops, x);
  std::vector<ComplexMatrix> out(ops.size());
  const auto count = static_cast<std::ptrdiff_t>(ops.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) out[k] = gemm_serial(ops[k], x);
  return out;
}

std::vector<ComplexMatrix> apply_batch(std::span<const ComplexMatrix> ops, const ComplexMatrix& x) {
  return ops.size() >= kParallelBatch ? apply_batch_parallel(ops, x) : apply_batch_serial(ops, x);
}

std::vector<ComplexMatrix> conjugate_batch_serial(std::span<const ComplexMatrix> ops, const ComplexMatrix& a) {
  check_batch(ops, a);
  std::vector<ComplexMatrix> out(ops.size());
  for (std::size_t k = 0; k < ops.size(); ++k) out[k] = gemm_serial(gemm_serial(ops[k], a), adjoint(ops[k]));
  return out;
}

std::vector<ComplexMatrix> conjugate_batch_parallel(std::span<const ComplexMatrix> ops, const ComplexMatrix& a) {
  check_batch(ops, a);
  std::vector<ComplexMatrix> out(ops.size());
  const auto count = static_cast<std::ptrdiff_t>(ops.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    out[k] = gemm_serial(gemm_serial(ops[k], a), adjoint(ops[k]));
  }
  return out;
}

std::vector<ComplexMatrix> conjugate_batch(std::span<const ComplexMatrix> ops, const ComplexMatrix& a) {
  return ops.size() >= kParallelBatch ? conjugate_batch_parallel(ops, a) : conjugate_batch_serial(ops, a);
}

std::vector<ComplexMatrix> reverse_conjugate_batch_serial(std::span<const ComplexMatrix> ops,
                                                          const ComplexMatrix& a) {
  check_batch(ops, a);
  std::vector<ComplexMatrix> out(ops.size());
  for (std::size_t k = 0; k < ops.size(); ++k) out[k] = gemm_serial(gemm_serial(adjoint(ops[k]), a), ops[k]);
  return out;
}

std::vector<ComplexMatrix> reverse_conjugate_batch_parallel(std::span<const ComplexMatrix> ops,
                                                            const ComplexMatrix& a) {
  check_batch(ops, a);
  std::vector<ComplexMatrix> out(ops.size());
  const auto count = static_cast<std::ptrdiff_t>(ops.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    out[k] = gemm_serial(gemm_serial(adjoint(ops[k]), a), ops[k]);
  }
  return out;
}

std::vector<ComplexMatrix> reverse_conjugate_batch(std::span<const ComplexMatrix> ops, const ComplexMatrix& a) {
  return ops.size() >= kParallelBatch ? reverse_conjugate_batch_parallel(ops, a)
                                      : reverse_conjugate_batch_serial(ops, a);
}

std::vector<double> unitarity_defect_batch_serial(std::span<const ComplexMatrix> ops) {
  std::vector<double> out(ops.size());
  for (std::size_t k = 0; k < ops.size(); ++k) out[k] = unitarity_defect(ops[k]);
  return out;
}

std::vector<double> unitarity_defect_batch_parallel(std::span<const ComplexMatrix> ops) {
  std::vector<double> out(ops.size());
  const auto count = static_cast<std::ptrdiff_t>(ops.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) out[k] = unitarity_defect(ops[k]);
  return out;
}

std::vector<double> unitarity_defect_batch(std::span<const ComplexMatrix> ops) {
  return ops.size() >= kParallelBatch ? unitarity_defect_batch_parallel(ops) : unitarity_defect_batch_serial(ops);
}

}  // namespace transportq::kernels
