#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "transportq/algebra.h"
#include "transportq/hamiltonian.h"

namespace transportq {

/// Product-integral steppers for dG/dt = sign i H(t) G.
enum class Method {
  euler,     // exp(A(t) dt), global order 1
  midpoint,  // exp(A(t + dt/2) dt), global order 2
  magnus4,   // two-point Gauss fourth-order Magnus, global order 4
};

std::string to_string(Method method);
/// Parses "euler" | "midpoint" | "magnus4"; std::nullopt otherwise.
std::optional<Method> parse_method(std::string_view name);

/// Uniform grid t0 + k (t1 - t0)/steps with the last point exactly t1.
std::vector<double> uniform_grid(double t0, double t1, int steps);

/// One-step propagator over [t, t + dt].
UnitaryMatrix step(const HamiltonianPath& h, double t, double dt, Method method);

/// Accumulated propagators G(t_k) on a uniform grid, G(t_0) = I.
class TransportOperator {
 public:
  TransportOperator(std::vector<double> grid, std::vector<UnitaryMatrix> unitaries, Method method, int sign);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<UnitaryMatrix>& unitaries() const noexcept { return unitaries_; }
  /// Plain matrices of the unitaries, for batch kernels.
  std::vector<ComplexMatrix> matrices() const;
  Method method() const noexcept { return method_; }
  int sign() const noexcept { return sign_; }
  std::size_t dim() const noexcept { return unitaries_.front().dim(); }
  const UnitaryMatrix& final() const noexcept { return unitaries_.back(); }

 private:
  std::vector<double> grid_;
  std::vector<UnitaryMatrix> unitaries_;
  Method method_;
  int sign_;
};

TransportOperator transport(const HamiltonianPath& h, double t0, double t1, int steps, Method method);

/// Hilbert section (n x 1 state columns) or algebra section (n x n elements).
enum class SectionKind { state, algebra };

/// A curve sampled on a strictly increasing time grid.
class Section {
 public:
  Section(SectionKind kind, std::vector<double> grid, std::vector<ComplexMatrix> values);

  SectionKind kind() const noexcept { return kind_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<ComplexMatrix>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return grid_.size(); }
  std::size_t dim() const noexcept { return values_.front().rows(); }

 private:
  SectionKind kind_;
  std::vector<double> grid_;
  std::vector<ComplexMatrix> values_;
};

/// psi(t_k) = G(t_k) y.
Section evolve_state(const TransportOperator& g, const ComplexMatrix& y);
/// alpha(t_k) = G(t_k) a G(t_k)^*.
Section heisenberg_transport(const TransportOperator& g, const ComplexMatrix& a);
/// beta(t_k) = G(t_k)^* a G(t_k), the observable pulled back to t_0.
Section reverse_transport(const TransportOperator& g, const ComplexMatrix& a);

/// Heisenberg evolution of a commuting family through the superoperator
/// exp(sign ∫δ_{H}) acting on vec(a). Throws Errc::domain when H(t) do not commute.
Section heisenberg_by_superoperator(const HamiltonianPath& h, const std::vector<double>& grid,
                                    const ComplexMatrix& a);

/// Discrete covariant derivative d/dt - sign i H(t) (state) or
/// d/dt - sign i [H(t), .] (algebra). Second-order three-point differences;
/// one-sided at the endpoints. Needs at least three grid points.
Section connection_apply(const HamiltonianPath& h, const Section& s);

/// Per-point norm of connection_apply on a state section.
std::vector<double> schrodinger_residual(const HamiltonianPath& h, const Section& s);
/// Per-point operator norm of connection_apply on an algebra section.
std::vector<double> heisenberg_residual(const HamiltonianPath& h, const Section& s);

}  // namespace transportq
