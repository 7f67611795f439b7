#pragma once

#include <span>
#include <vector>

#include "transportq/algebra.h"

// Data-parallel inner loops. Every kernel has a serial reference twin that the
// tests compare against bit for bit; each output element is computed by one
// thread in the same order as the serial loop, so results do not depend on the
// thread count.
namespace transportq::kernels {

/// Dimension at which operator* switches from gemm_serial to gemm_parallel.
inline constexpr std::size_t kParallelGemmDim = 48;
/// Batch length at which the *_batch dispatchers go parallel.
inline constexpr std::size_t kParallelBatch = 64;

ComplexMatrix gemm_serial(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix gemm_parallel(const ComplexMatrix& a, const ComplexMatrix& b);

// out[k] = ops[k] * x
std::vector<ComplexMatrix> apply_batch_serial(std::span<const ComplexMatrix> ops, const ComplexMatrix& x);
std::vector<ComplexMatrix> apply_batch_parallel(std::span<const ComplexMatrix> ops, const ComplexMatrix& x);
std::vector<ComplexMatrix> apply_batch(std::span<const ComplexMatrix> ops, const ComplexMatrix& x);

// out[k] = ops[k] * a * ops[k]^*
std::vector<ComplexMatrix> conjugate_batch_serial(std::span<const ComplexMatrix> ops, const ComplexMatrix& a);
std::vector<ComplexMatrix> conjugate_batch_parallel(std::span<const ComplexMatrix> ops, const ComplexMatrix& a);
std::vector<ComplexMatrix> conjugate_batch(std::span<const ComplexMatrix> ops, const ComplexMatrix& a);

// out[k] = ops[k]^* * a * ops[k]
std::vector<ComplexMatrix> reverse_conjugate_batch_serial(std::span<const ComplexMatrix> ops, const ComplexMatrix& a);
std::vector<ComplexMatrix> reverse_conjugate_batch_parallel(std::span<const ComplexMatrix> ops, const ComplexMatrix& a);
std::vector<ComplexMatrix> reverse_conjugate_batch(std::span<const ComplexMatrix> ops, const ComplexMatrix& a);

// out[k] = ‖ops[k]^* ops[k] - I‖
std::vector<double> unitarity_defect_batch_serial(std::span<const ComplexMatrix> ops);
std::vector<double> unitarity_defect_batch_parallel(std::span<const ComplexMatrix> ops);
std::vector<double> unitarity_defect_batch(std::span<const ComplexMatrix> ops);

}  // namespace transportq::kernels
