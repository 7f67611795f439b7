#include "transportq/transport.h"

#include <array>
#include <cmath>
#include <cstddef>

#include "transportq/derivations.h"
#include "transportq/errors.h"
#include "transportq/kernels.h"

namespace transportq {

namespace {

// Gauss-Legendre nodes on [0, 1] and the commutator weight of the
// fourth-order Magnus truncation.
const double kSqrt3 = std::sqrt(3.0);
const double kGaussLo = 0.5 - kSqrt3 / 6.0;
const double kGaussHi = 0.5 + kSqrt3 / 6.0;
const double kMagnusCommutatorWeight = kSqrt3 / 12.0;

void require_in_domain(const HamiltonianPath& h, double t, const char* op) {
  if (!h.contains(t)) {
    throw domain_error(std::string(op) + ": t = " + sci(t) + " outside the Hamiltonian domain [" +
                       sci(h.domain_begin()) + ", " + sci(h.domain_end()) + "]");
  }
}

// Weights of the three-point derivative at point `at` (0, 1, 2) of nodes x.
std::array<double, 3> derivative_weights(double x0, double x1, double x2, int at) {
  const double h1 = x1 - x0;
  const double h2 = x2 - x1;
  const double h12 = h1 + h2;
  switch (at) {
    case 0: return {-(2.0 * h1 + h2) / (h1 * h12), h12 / (h1 * h2), -h1 / (h2 * h12)};
    case 1: return {-h2 / (h1 * h12), (h2 - h1) / (h1 * h2), h1 / (h2 * h12)};
    default: return {h2 / (h1 * h12), -h12 / (h1 * h2), (2.0 * h2 + h1) / (h2 * h12)};
  }
}

void check_section_against_path(const HamiltonianPath& h, const Section& s, const char* op) {
  if (s.size() < 3) throw domain_error(std::string(op) + ": need at least 3 grid points, got " +
                                       std::to_string(s.size()));
  if (s.dim() != h.dim()) throw dimension_error(std::string(op) + ": section and Hamiltonian dimensions differ");
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::euler: return "euler";
    case Method::midpoint: return "midpoint";
    case Method::magnus4: return "magnus4";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "euler") return Method::euler;
  if (name == "midpoint") return Method::midpoint;
  if (name == "magnus4") return Method::magnus4;
  return std::nullopt;
}

std::vector<double> uniform_grid(double t0, double t1, int steps) {
  if (steps < 1) throw domain_error("grid needs at least one step, got " + std::to_string(steps));
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    throw domain_error("grid interval [" + sci(t0) + ", " + sci(t1) + "] is empty or non-finite");
  }
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  const double span = t1 - t0;
  for (int k = 0; k < steps; ++k) grid[k] = t0 + span * (static_cast<double>(k) / steps);
  grid.back() = t1;
  return grid;
}

UnitaryMatrix step(const HamiltonianPath& h, double t, double dt, Method method) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw domain_error("step: dt must be positive, got " + sci(dt));
  require_in_domain(h, t, "step");
  require_in_domain(h, t + dt, "step");

  switch (method) {
    case Method::euler:
      return UnitaryMatrix(matrix_exp(h.generator(t) * dt));
    case Method::midpoint:
      return UnitaryMatrix(matrix_exp(h.generator(t + 0.5 * dt) * dt));
    case Method::magnus4: {
      const ComplexMatrix a1 = h.generator(t + kGaussLo * dt);
      const ComplexMatrix a2 = h.generator(t + kGaussHi * dt);
      ComplexMatrix omega = (a1 + a2) * (0.5 * dt);
      omega += commutator(a2, a1) * (kMagnusCommutatorWeight * dt * dt);
      return UnitaryMatrix(matrix_exp(omega));
    }
  }
  throw domain_error("step: unknown method");
}

TransportOperator::TransportOperator(std::vector<double> grid, std::vector<UnitaryMatrix> unitaries, Method method,
                                     int sign)
    : grid_(std::move(grid)), unitaries_(std::move(unitaries)), method_(method), sign_(sign) {
  if (grid_.empty() || grid_.size() != unitaries_.size()) {
    throw dimension_error("TransportOperator: grid and unitary list lengths differ");
  }
  for (std::size_t k = 1; k < grid_.size(); ++k) {
    if (!(grid_[k] > grid_[k - 1])) throw domain_error("TransportOperator: grid is not strictly increasing");
  }
  if (unitaries_.front().matrix() != ComplexMatrix::identity(unitaries_.front().dim())) {
    throw domain_error("TransportOperator: G(t0) must be the identity");
  }
}

std::vector<ComplexMatrix> TransportOperator::matrices() const {
  std::vector<ComplexMatrix> out;
  out.reserve(unitaries_.size());
  for (const auto& u : unitaries_) out.push_back(u.matrix());
  return out;
}

TransportOperator transport(const HamiltonianPath& h, double t0, double t1, int steps, Method method) {
  std::vector<double> grid = uniform_grid(t0, t1, steps);
  require_in_domain(h, t0, "transport");
  require_in_domain(h, t1, "transport");

  std::vector<UnitaryMatrix> unitaries;
  unitaries.reserve(grid.size());
  unitaries.push_back(UnitaryMatrix::identity(h.dim()));
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const UnitaryMatrix u = step(h, grid[k], grid[k + 1] - grid[k], method);
    try {
      unitaries.emplace_back(u.matrix() * unitaries.back().matrix());
    } catch (const Error& e) {
      throw e.with_context("transport step " + std::to_string(k + 1) + " at t = " + sci(grid[k + 1]));
    }
  }
  return TransportOperator(std::move(grid), std::move(unitaries), method, h.sign());
}

Section::Section(SectionKind kind, std::vector<double> grid, std::vector<ComplexMatrix> values)
    : kind_(kind), grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.empty() || grid_.size() != values_.size()) {
    throw dimension_error("Section: grid and value counts differ or are empty");
  }
  for (std::size_t k = 1; k < grid_.size(); ++k) {
    if (!(grid_[k] > grid_[k - 1])) throw domain_error("Section: grid is not strictly increasing");
  }
  const std::size_t n = values_.front().rows();
  const std::size_t cols = kind_ == SectionKind::state ? 1 : n;
  for (const auto& v : values_) {
    if (v.rows() != n || v.cols() != cols) {
      throw dimension_error(kind_ == SectionKind::state ? "Section: state values must be n x 1 columns"
                                                        : "Section: algebra values must be n x n");
    }
  }
}

Section evolve_state(const TransportOperator& g, const ComplexMatrix& y) {
  if (y.cols() != 1 || y.rows() != g.dim()) {
    throw dimension_error("evolve_state: state must be a " + std::to_string(g.dim()) + " x 1 column");
  }
  const auto ops = g.matrices();
  return Section(SectionKind::state, g.grid(), kernels::apply_batch(ops, y));
}

Section heisenberg_transport(const TransportOperator& g, const ComplexMatrix& a) {
  if (!a.is_square() || a.rows() != g.dim()) throw dimension_error("heisenberg_transport: dimension mismatch");
  const auto ops = g.matrices();
  return Section(SectionKind::algebra, g.grid(), kernels::conjugate_batch(ops, a));
}

Section reverse_transport(const TransportOperator& g, const ComplexMatrix& a) {
  if (!a.is_square() || a.rows() != g.dim()) throw dimension_error("reverse_transport: dimension mismatch");
  const auto ops = g.matrices();
  return Section(SectionKind::algebra, g.grid(), kernels::reverse_conjugate_batch(ops, a));
}

Section heisenberg_by_superoperator(const HamiltonianPath& h, const std::vector<double>& grid,
                                    const ComplexMatrix& a) {
  if (!h.is_commuting()) throw domain_error("superoperator evolution needs a commuting generator family");
  if (!a.is_square() || a.rows() != h.dim()) throw dimension_error("heisenberg_by_superoperator: dimension mismatch");
  std::vector<ComplexMatrix> values;
  values.reserve(grid.size());
  const ComplexMatrix va = vec(a);
  for (double t : grid) {
    const InnerDerivation integrated(HermitianMatrix(h.integrated(grid.front(), t)));
    const Superoperator s = derivation_superoperator(integrated);
    const ComplexMatrix propagator = matrix_exp(s.entries() * static_cast<double>(h.sign()));
    values.push_back(unvec(propagator * va, h.dim()));
  }
  return Section(SectionKind::algebra, grid, std::move(values));
}

Section connection_apply(const HamiltonianPath& h, const Section& s) {
  check_section_against_path(h, s, "connection_apply");
  const auto& grid = s.grid();
  const auto& values = s.values();
  const std::size_t count = grid.size();

  std::vector<ComplexMatrix> generators;
  generators.reserve(count);
  for (double t : grid) generators.push_back(h.generator(t));

  std::vector<ComplexMatrix> out(count);
  const bool is_state = s.kind() == SectionKind::state;
  const auto n_points = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) if (count >= kernels::kParallelBatch)
  for (std::ptrdiff_t sk = 0; sk < n_points; ++sk) {
    const auto k = static_cast<std::size_t>(sk);
    // Stencil nodes: first three, last three, or centred.
    const std::size_t base = k == 0 ? 0 : (k == count - 1 ? count - 3 : k - 1);
    const int at = static_cast<int>(k - base);
    const auto w = derivative_weights(grid[base], grid[base + 1], grid[base + 2], at);
    ComplexMatrix d = values[base] * w[0];
    d += values[base + 1] * w[1];
    d += values[base + 2] * w[2];
    const ComplexMatrix& gen = generators[k];
    if (is_state) {
      d -= kernels::gemm_serial(gen, values[k]);
    } else {
      d -= kernels::gemm_serial(gen, values[k]) - kernels::gemm_serial(values[k], gen);
    }
    out[k] = std::move(d);
  }
  return Section(s.kind(), grid, std::move(out));
}

std::vector<double> schrodinger_residual(const HamiltonianPath& h, const Section& s) {
  if (s.kind() != SectionKind::state) throw dimension_error("schrodinger_residual: expected a state section");
  const Section d = connection_apply(h, s);
  std::vector<double> out;
  out.reserve(d.size());
  for (const auto& v : d.values()) out.push_back(frobenius_norm(v));
  return out;
}

std::vector<double> heisenberg_residual(const HamiltonianPath& h, const Section& s) {
  if (s.kind() != SectionKind::algebra) throw dimension_error("heisenberg_residual: expected an algebra section");
  const Section d = connection_apply(h, s);
  std::vector<double> out;
  out.reserve(d.size());
  for (const auto& v : d.values()) out.push_back(operator_norm(v));
  return out;
}

}  // namespace transportq
