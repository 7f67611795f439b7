#pragma once

namespace transportq::tol {

// Relative: max-entry deviation of a - a* against the operator norm of a.
inline constexpr double kHermiticity = 1e-12;
// Operator-norm defect of U*U - I.
inline constexpr double kUnitarity = 1e-10;
// Relative accuracy promised by operator_norm.
inline constexpr double kNormAccuracy = 1e-10;

inline constexpr int kMaxDim = 64;

}  // namespace transportq::tol
