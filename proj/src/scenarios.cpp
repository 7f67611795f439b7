#include "transportq/scenarios.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "transportq/derivations.h"
#include "transportq/errors.h"
#include "transportq/kernels.h"
#include "transportq/random.h"

namespace transportq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr cplx kI{0.0, 1.0};

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw e.with_context(std::string("stage '") + name + "'");
  }
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// Rigorous bound for the three-point derivative stencils on a uniform grid:
// h^2 max‖f'''‖ plus roundoff amplified by 1/h.
double finite_difference_bound(double h, double third_derivative_bound) {
  return h * h * third_derivative_bound + 1e-13 / h;
}

std::string fail(const std::string& what, double value, double limit) {
  return what + " = " + sci(value) + " exceeds " + sci(limit);
}

}  // namespace

void Scenario::validate() const {
  if (!initial_state && !initial_observable) {
    throw domain_error("scenario '" + name + "': needs an initial state or an initial observable");
  }
  if (steps < 2) throw domain_error("scenario '" + name + "': steps must be >= 2, got " + std::to_string(steps));
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw domain_error("scenario '" + name + "': t_final must be positive and finite");
  }
  if (!path.contains(0.0) || !path.contains(t_final)) {
    throw domain_error("scenario '" + name + "': [0, t_final] is outside the Hamiltonian domain");
  }
  const std::size_t n = path.dim();
  if (initial_state && (initial_state->rows() != n || initial_state->cols() != 1)) {
    throw dimension_error("scenario '" + name + "': initial_state must be a " + std::to_string(n) + " x 1 column");
  }
  if (initial_state && frobenius_norm(*initial_state) == 0.0) {
    throw domain_error("scenario '" + name + "': initial_state is zero");
  }
  if (initial_observable && (initial_observable->rows() != n || initial_observable->cols() != n)) {
    throw dimension_error("scenario '" + name + "': initial_observable must be " + std::to_string(n) + " x " +
                          std::to_string(n));
  }
}

bool RunReport::same_results(const RunReport& other) const {
  auto same_convergence = [](const std::optional<ConvergenceResult>& a, const std::optional<ConvergenceResult>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->step_counts == b->step_counts && a->errors == b->errors && a->reference_steps == b->reference_steps &&
           a->exact == b->exact && a->slope == b->slope;
  };
  auto same_record = [](const RunRecord& a, const RunRecord& b) {
    auto eq = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    return eq(a.t, b.t) && eq(a.psi_norm, b.psi_norm) && eq(a.unitarity_defect, b.unitarity_defect) &&
           eq(a.schrodinger_residual, b.schrodinger_residual) && eq(a.heisenberg_residual, b.heisenberg_residual) &&
           eq(a.picture_gap, b.picture_gap) && eq(a.expectation.real(), b.expectation.real()) &&
           eq(a.expectation.imag(), b.expectation.imag());
  };
  if (name != other.name || records.size() != other.records.size()) return false;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (!same_record(records[k], other.records[k])) return false;
  }
  const auto& s = summary;
  const auto& o = other.summary;
  return s.max_unitarity_defect == o.max_unitarity_defect && s.max_schrodinger_residual == o.max_schrodinger_residual &&
         s.max_heisenberg_residual == o.max_heisenberg_residual && s.max_picture_gap == o.max_picture_gap &&
         s.max_norm_drift == o.max_norm_drift && same_convergence(s.convergence, o.convergence);
}

cplx expectation_value(const ComplexMatrix& a, const ComplexMatrix& psi) {
  if (psi.cols() != 1 || !a.is_square() || a.rows() != psi.rows()) {
    throw dimension_error("expectation_value: operator and state dimensions differ");
  }
  const cplx norm_sq = inner_product(psi, psi);
  if (norm_sq.real() == 0.0) throw domain_error("expectation_value: zero state");
  return inner_product(psi, a * psi) / norm_sq;
}

RunReport run_scenario(const Scenario& s, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  stage("validate", [&] {
    s.validate();
    return 0;
  });

  const TransportOperator g = stage("transport", [&] { return transport(s.path, 0.0, s.t_final, s.steps, s.method); });
  const auto ops = g.matrices();
  const std::size_t count = ops.size();

  RunReport report;
  report.name = s.name;
  report.records.resize(count);
  const auto defects = kernels::unitarity_defect_batch(ops);
  for (std::size_t k = 0; k < count; ++k) {
    auto& r = report.records[k];
    r.t = g.grid()[k];
    r.unitarity_defect = defects[k];
    r.psi_norm = r.schrodinger_residual = r.heisenberg_residual = r.picture_gap = kNaN;
    r.expectation = {kNaN, kNaN};
  }
  report.summary.max_unitarity_defect = max_of(defects);

  std::optional<Section> psi;
  if (s.initial_state) {
    psi = stage("evolve_state", [&] { return evolve_state(g, *s.initial_state); });
    const auto residual = stage("schrodinger_residual", [&] { return schrodinger_residual(s.path, *psi); });
    const double y_norm = frobenius_norm(*s.initial_state);
    for (std::size_t k = 0; k < count; ++k) {
      auto& r = report.records[k];
      r.psi_norm = frobenius_norm(psi->values()[k]);
      r.schrodinger_residual = residual[k];
      report.summary.max_norm_drift = std::max(report.summary.max_norm_drift, std::abs(r.psi_norm - y_norm) / y_norm);
    }
    report.summary.max_schrodinger_residual = max_of(residual);
  }

  std::optional<Section> alpha;
  if (s.initial_observable) {
    alpha = stage("heisenberg_transport", [&] { return heisenberg_transport(g, *s.initial_observable); });
    const auto residual = stage("heisenberg_residual", [&] { return heisenberg_residual(s.path, *alpha); });
    for (std::size_t k = 0; k < count; ++k) report.records[k].heisenberg_residual = residual[k];
    report.summary.max_heisenberg_residual = max_of(residual);
  }

  if (psi && alpha) {
    stage("picture_equivalence", [&] {
      const ComplexMatrix& a = *s.initial_observable;
      const ComplexMatrix& y = *s.initial_state;
      const Section beta = reverse_transport(g, a);
      std::optional<Section> via_super;
      if (s.path.is_commuting()) via_super = heisenberg_by_superoperator(s.path, g.grid(), a);
      for (std::size_t k = 0; k < count; ++k) {
        const ComplexMatrix& psi_k = psi->values()[k];
        const cplx forward = inner_product(psi_k, a * psi_k);
        const cplx pulled_back = inner_product(y, beta.values()[k] * y);
        double gap = std::abs(forward - pulled_back);
        if (via_super) gap = std::max(gap, operator_norm(alpha->values()[k] - via_super->values()[k]));
        auto& r = report.records[k];
        r.picture_gap = gap;
        r.expectation = expectation_value(a, psi_k);
        report.summary.max_picture_gap = std::max(report.summary.max_picture_gap, gap);
      }
      return 0;
    });
  }

  if (!options.convergence_steps.empty()) {
    report.summary.convergence =
        stage("convergence", [&] { return estimate_convergence_order(s, options.convergence_steps); });
  }

  report.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

ConvergenceResult estimate_convergence_order(const Scenario& s, const std::vector<int>& step_counts,
                                             const ConvergenceOptions& options) {
  if (step_counts.size() < 3) throw domain_error("convergence study needs at least 3 step counts");
  for (std::size_t k = 0; k < step_counts.size(); ++k) {
    if (step_counts[k] < 1) throw domain_error("step counts must be positive");
    if (k > 0 && step_counts[k] <= step_counts[k - 1]) throw domain_error("step counts must be strictly increasing");
  }
  const int finest = step_counts.back();
  const int reference_steps = options.reference_steps > 0 ? options.reference_steps : 100 * finest;
  if (reference_steps < 100 * finest) {
    throw domain_error("reference needs at least 100x the finest step count (" + std::to_string(100 * finest) + ")");
  }

  ConvergenceResult result;
  result.step_counts = step_counts;
  result.reference_steps = reference_steps;
  const ComplexMatrix reference = stage("reference", [&] {
    return transport(s.path, 0.0, s.t_final, reference_steps, options.reference_method).final().matrix();
  });
  for (int n : step_counts) {
    const ComplexMatrix g = transport(s.path, 0.0, s.t_final, n, s.method).final().matrix();
    result.errors.push_back(operator_norm(g - reference));
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < step_counts.size(); ++k) {
    if (result.errors[k] <= options.exact_threshold) continue;
    xs.push_back(std::log(s.t_final / step_counts[k]));
    ys.push_back(std::log(result.errors[k]));
  }
  if (xs.empty()) {
    result.exact = true;
    return result;
  }
  if (xs.size() < 2) {
    throw numerical_error("convergence study: only one step count lies above the roundoff threshold " +
                          sci(options.exact_threshold));
  }
  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mean_x += xs[k] / n;
    mean_y += ys[k] / n;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mean_x) * (ys[k] - mean_y);
    sxx += (xs[k] - mean_x) * (xs[k] - mean_x);
  }
  result.slope = sxy / sxx;
  return result;
}

PictureEquivalence check_picture_equivalence(const Scenario& s) {
  if (!s.initial_state || !s.initial_observable) {
    throw domain_error("picture equivalence needs both an initial state and an initial observable");
  }
  s.validate();
  const TransportOperator g = transport(s.path, 0.0, s.t_final, s.steps, s.method);
  const ComplexMatrix& a = *s.initial_observable;
  const ComplexMatrix& y = *s.initial_state;
  const Section psi = evolve_state(g, y);
  const Section beta = reverse_transport(g, a);

  PictureEquivalence out;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const ComplexMatrix& psi_k = psi.values()[k];
    const cplx gap = inner_product(psi_k, a * psi_k) - inner_product(y, beta.values()[k] * y);
    out.expectation_gap = std::max(out.expectation_gap, std::abs(gap));
  }
  if (s.path.is_commuting()) {
    const Section alpha = heisenberg_transport(g, a);
    const Section via_super = heisenberg_by_superoperator(s.path, g.grid(), a);
    double worst = 0.0;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      worst = std::max(worst, operator_norm(alpha.values()[k] - via_super.values()[k]));
    }
    out.superoperator_gap = worst;
  }
  return out;
}

namespace scenarios {

Scenario conservative() {
  return Scenario{
      .name = "conservative",
      .path = HamiltonianPath::constant(HermitianMatrix(pauli::z())),
      .initial_state = ComplexMatrix::column({1.0, 0.0}),
      .initial_observable = pauli::x(),
      .t_final = 1.0,
      .steps = 256,
      .method = Method::magnus4,
      .seed = 0,
  };
}

Scenario commuting_family() {
  return Scenario{
      .name = "commuting",
      .path = HamiltonianPath::scalar(Polynomial{{0.5, 1.0}}, HermitianMatrix(pauli::x() * 0.6 + pauli::z() * 0.8)),
      .initial_state = ComplexMatrix::column({1.0, 0.0}),
      .initial_observable = pauli::z(),
      .t_final = 1.0,
      .steps = 256,
      .method = Method::midpoint,
      .seed = 0,
  };
}

Scenario benchmark() {
  return Scenario{
      .name = "benchmark",
      .path = HamiltonianPath::pauli_sum({PathTerm{Polynomial{{1.0}}, HermitianMatrix(pauli::z())},
                                          PathTerm{Polynomial{{0.0, 1.0}}, HermitianMatrix(pauli::x())}}),
      .initial_state = ComplexMatrix::column({1.0, 0.0}),
      .initial_observable = pauli::x(),
      .t_final = 1.0,
      .steps = 256,
      .method = Method::magnus4,
      .seed = 0,
  };
}

Scenario random_hermitian(std::uint64_t seed) {
  CounterRng rng(seed);
  constexpr std::size_t n = 4;
  HermitianMatrix h = transportq::random_hermitian(rng, n);
  ComplexMatrix y = random_state(rng, n);
  ComplexMatrix a = transportq::random_hermitian(rng, n).matrix();
  return Scenario{
      .name = "random",
      .path = HamiltonianPath::constant(std::move(h)),
      .initial_state = std::move(y),
      .initial_observable = std::move(a),
      .t_final = 1.0,
      .steps = 64,
      .method = Method::magnus4,
      .seed = seed,
  };
}

}  // namespace scenarios

namespace {

std::string check_conservative(const Scenario& s) {
  const RunReport report = run_scenario(s);
  const TransportOperator g = transport(s.path, 0.0, s.t_final, s.steps, s.method);
  const Section psi = evolve_state(g, *s.initial_state);
  const Section alpha = heisenberg_transport(g, *s.initial_observable);
  double state_err = 0.0;
  double observable_err = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double t = psi.grid()[k];
    const ComplexMatrix exact_state = ComplexMatrix::column({std::exp(kI * t), 0.0});
    const ComplexMatrix exact_obs = pauli::x() * std::cos(2.0 * t) - pauli::y() * std::sin(2.0 * t);
    state_err = std::max(state_err, frobenius_norm(psi.values()[k] - exact_state));
    observable_err = std::max(observable_err, operator_norm(alpha.values()[k] - exact_obs));
  }
  const double h = s.t_final / s.steps;
  if (state_err > 1e-10) return fail("state error", state_err, 1e-10);
  if (observable_err > 1e-10) return fail("observable error", observable_err, 1e-10);
  const double state_bound = finite_difference_bound(h, 1.0);
  if (report.summary.max_schrodinger_residual > state_bound) {
    return fail("Schrodinger residual", report.summary.max_schrodinger_residual, state_bound);
  }
  const double obs_bound = finite_difference_bound(h, 8.0);
  if (report.summary.max_heisenberg_residual > obs_bound) {
    return fail("Heisenberg residual", report.summary.max_heisenberg_residual, obs_bound);
  }
  if (report.summary.max_unitarity_defect > 1e-10) return fail("unitarity defect", report.summary.max_unitarity_defect, 1e-10);
  return {};
}

std::string check_commuting(const Scenario& s) {
  const TransportOperator g = transport(s.path, 0.0, s.t_final, s.steps, s.method);
  const ComplexMatrix h0 = s.path.terms().front().matrix.matrix();
  const Polynomial antiderivative = s.path.terms().front().coefficient.integral();
  double err = 0.0;
  for (std::size_t k = 0; k < g.grid().size(); ++k) {
    // h0^2 = I, so exp(i F h0) = cos(F) I + i sin(F) h0.
    const double f = antiderivative(g.grid()[k]) * s.path.sign();
    const ComplexMatrix exact = ComplexMatrix::identity(2) * std::cos(f) + h0 * (kI * std::sin(f));
    err = std::max(err, operator_norm(g.unitaries()[k].matrix() - exact));
  }
  if (err > 1e-10) return fail("transport error", err, 1e-10);
  const auto picture = check_picture_equivalence(s);
  if (picture.gap() > 1e-9) return fail("picture gap", picture.gap(), 1e-9);
  const auto order = estimate_convergence_order(s, {16, 32, 64});
  if (!order.exact) return "midpoint on a linear commuting family was not flagged exact";
  return {};
}

std::string check_benchmark(const Scenario& s) {
  const RunReport report = run_scenario(s);
  if (report.summary.max_picture_gap > 1e-8) return fail("picture gap", report.summary.max_picture_gap, 1e-8);
  if (report.summary.max_unitarity_defect > 1e-10) return fail("unitarity defect", report.summary.max_unitarity_defect, 1e-10);
  if (report.summary.max_norm_drift > 1e-9) return fail("norm drift", report.summary.max_norm_drift, 1e-9);
  const auto order = estimate_convergence_order(s, {16, 32, 64, 128, 256});
  if (order.exact || std::abs(order.slope - 4.0) > 0.3) {
    return "magnus4 convergence slope " + sci(order.slope) + " outside 4.0 +/- 0.3";
  }
  return {};
}

std::string check_random(const Scenario& s) {
  // Independent route: exp(itH) y through the eigendecomposition of H.
  using EigenMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
  const ComplexMatrix& h = s.path.terms().front().matrix.matrix();
  const std::size_t n = h.rows();
  EigenMatrix hm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) hm(i, j) = h(i, j);
  Eigen::SelfAdjointEigenSolver<EigenMatrix> eig(hm);
  const EigenMatrix& v = eig.eigenvectors();
  EigenMatrix y(n, 1);
  for (std::size_t i = 0; i < n; ++i) y(i, 0) = (*s.initial_state)(i, 0);

  const TransportOperator g = transport(s.path, 0.0, s.t_final, s.steps, s.method);
  const Section psi = evolve_state(g, *s.initial_state);
  double err = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double t = psi.grid()[k];
    EigenMatrix phases = EigenMatrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) phases(i, i) = std::exp(kI * (s.path.sign() * t * eig.eigenvalues()(i)));
    const EigenMatrix exact = v * phases * v.adjoint() * y;
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += std::norm(psi.values()[k](i, 0) - exact(i, 0));
    err = std::max(err, std::sqrt(diff));
  }
  if (err > 1e-10) return fail("state error", err, 1e-10);
  const auto picture = check_picture_equivalence(s);
  if (picture.gap() > 1e-9) return fail("picture gap", picture.gap(), 1e-9);
  return {};
}

}  // namespace

const std::vector<BuiltinScenario>& builtin_scenarios() {
  static const std::vector<BuiltinScenario> all{
      {"conservative", [] { return scenarios::conservative(); }, check_conservative},
      {"commuting", [] { return scenarios::commuting_family(); }, check_commuting},
      {"benchmark", [] { return scenarios::benchmark(); }, check_benchmark},
      {"random", [] { return scenarios::random_hermitian(); }, check_random},
  };
  return all;
}

const BuiltinScenario& find_builtin(const std::string& name) {
  for (const auto& b : builtin_scenarios()) {
    if (b.name == name) return b;
  }
  throw config_error("unknown scenario suite '" + name + "'");
}

}  // namespace transportq
