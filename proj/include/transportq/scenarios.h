#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "transportq/algebra.h"
#include "transportq/hamiltonian.h"
#include "transportq/transport.h"

namespace transportq {

/// One evolution run: generator, initial data, grid on [0, t_final] and method.
struct Scenario {
  std::string name;
  HamiltonianPath path;
  std::optional<ComplexMatrix> initial_state;       // n x 1
  std::optional<ComplexMatrix> initial_observable;  // n x n
  double t_final = 1.0;
  int steps = 256;
  Method method = Method::magnus4;
  std::uint64_t seed = 0;

  /// Throws Errc::domain / Errc::dimension when the invariants fail.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Per grid point. Quantities that need missing initial data are NaN.
struct RunRecord {
  double t = 0.0;
  double psi_norm = 0.0;
  double unitarity_defect = 0.0;
  double schrodinger_residual = 0.0;
  double heisenberg_residual = 0.0;
  double picture_gap = 0.0;
  cplx expectation{0.0, 0.0};

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct ConvergenceResult {
  std::vector<int> step_counts;
  std::vector<double> errors;
  int reference_steps = 0;
  /// All errors at roundoff level; `slope` is then meaningless.
  bool exact = false;
  double slope = 0.0;
};

struct RunSummary {
  double max_unitarity_defect = 0.0;
  double max_schrodinger_residual = 0.0;
  double max_heisenberg_residual = 0.0;
  double max_picture_gap = 0.0;
  double max_norm_drift = 0.0;
  std::optional<ConvergenceResult> convergence;
  double wall_seconds = 0.0;
};

struct RunReport {
  std::string name;
  std::vector<RunRecord> records;
  RunSummary summary;

  /// Equality of everything except wall time.
  bool same_results(const RunReport& other) const;
};

struct RunOptions {
  /// Non-empty: also estimate the convergence order at these step counts.
  std::vector<int> convergence_steps;
};

RunReport run_scenario(const Scenario& s, const RunOptions& options = {});

/// <psi, a psi> / <psi, psi>.
cplx expectation_value(const ComplexMatrix& a, const ComplexMatrix& psi);

struct ConvergenceOptions {
  /// 0 selects 100 x the largest step count.
  int reference_steps = 0;
  Method reference_method = Method::magnus4;
  /// Terminal errors at or below this count as exact.
  double exact_threshold = 1e-12;
};

/// Least-squares slope of log(error) against log(dt), error being the
/// operator-norm distance of G(t_final) from a fine-grid reference.
ConvergenceResult estimate_convergence_order(const Scenario& s, const std::vector<int>& step_counts,
                                             const ConvergenceOptions& options = {});

struct PictureEquivalence {
  /// max_k |<psi_k, a psi_k> - <y, beta_k y>|.
  double expectation_gap = 0.0;
  /// max_k ‖alpha_k - superoperator evolution‖ for commuting families.
  std::optional<double> superoperator_gap;

  double gap() const { return superoperator_gap ? std::max(expectation_gap, *superoperator_gap) : expectation_gap; }
};

PictureEquivalence check_picture_equivalence(const Scenario& s);

/// Built-in scenario with its oracle.
struct BuiltinScenario {
  std::string name;
  std::function<Scenario()> make;
  /// Runs the scenario and checks it against its closed-form or
  /// self-convergence oracle. Returns an empty string on success, otherwise a
  /// diagnostic.
  std::function<std::string(const Scenario&)> check;
};

const std::vector<BuiltinScenario>& builtin_scenarios();
/// Throws Errc::config for an unknown name.
const BuiltinScenario& find_builtin(const std::string& name);

namespace scenarios {
/// H = sigma_z, y = (1, 0), a = sigma_x on [0, 1].
Scenario conservative();
/// H(t) = (1/2 + t)(0.6 sigma_x + 0.8 sigma_z), midpoint.
Scenario commuting_family();
/// H(t) = sigma_z + t sigma_x, y = (1, 0), a = sigma_x on [0, 1].
Scenario benchmark();
/// Seeded random constant 4 x 4 generator, state and observable.
Scenario random_hermitian(std::uint64_t seed = 20240917);
}  // namespace scenarios

}  // namespace transportq
