#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.h"
#include "transportq/errors.h"
#include "transportq/random.h"
#include "transportq/transport.h"

using namespace transportq;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

constexpr cplx kI{0.0, 1.0};
constexpr Method kMethods[] = {Method::euler, Method::midpoint, Method::magnus4};

HamiltonianPath zero_path(std::size_t n = 2) { return HamiltonianPath::constant(HermitianMatrix::zero(n)); }

HamiltonianPath benchmark_path() {
  return HamiltonianPath::pauli_sum({{Polynomial{{1.0}}, HermitianMatrix(pauli::z())},
                                     {Polynomial{{0.0, 1.0}}, HermitianMatrix(pauli::x())}});
}

// exp(i F sigma_z) as a diagonal.
ComplexMatrix diag_phase(double f) {
  const cplx d[] = {std::exp(kI * f), std::exp(-kI * f)};
  return ComplexMatrix::diagonal(d);
}

// e^{it} (1, 0) sampled on a uniform grid of [0, t_final].
Section exact_conservative_state(double t_final, int steps) {
  std::vector<ComplexMatrix> values;
  const auto grid = uniform_grid(0.0, t_final, steps);
  for (double t : grid) values.push_back(ComplexMatrix::column({std::exp(kI * t), 0.0}));
  return Section(SectionKind::state, grid, values);
}

Section exact_conservative_observable(double t_final, int steps) {
  std::vector<ComplexMatrix> values;
  const auto grid = uniform_grid(0.0, t_final, steps);
  for (double t : grid) values.push_back(pauli::x() * std::cos(2.0 * t) - pauli::y() * std::sin(2.0 * t));
  return Section(SectionKind::algebra, grid, values);
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

TEST_CASE("method names") {
  for (Method m : kMethods) CHECK(parse_method(to_string(m)) == m);
  CHECK_FALSE(parse_method("rk4").has_value());
}

TEST_CASE("uniform grid") {
  const auto grid = uniform_grid(0.5, 1.5, 4);
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == 0.5);
  CHECK(grid[2] == doctest::Approx(1.0));
  CHECK(grid.back() == 1.5);
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 0), Error);
  CHECK_THROWS_AS(uniform_grid(1.0, 1.0, 3), Error);
}

TEST_CASE("step examples") {
  for (Method m : kMethods) CHECK(step(zero_path(), 0.3, 0.1, m).matrix() == ComplexMatrix::identity(2));

  CounterRng rng(1);
  const ComplexMatrix h = random_hermitian(rng, 3).matrix();
  const auto constant = HamiltonianPath::constant(HermitianMatrix(h));
  for (double dt : {1e-3, 0.1, 1.0, 3.0}) {
    const ComplexMatrix expected = oracle::exp_hermitian(h, kI * dt);
    for (Method m : kMethods) CHECK(operator_norm(step(constant, 0.7, dt, m).matrix() - expected) <= 1e-12);
  }

  // Midpoint integrates a linear commuting coefficient exactly.
  const auto linear = HamiltonianPath::scalar(Polynomial{{0.0, 1.0}}, HermitianMatrix(pauli::z()));
  for (double dt : {0.01, 0.5, 2.0}) {
    CHECK(oracle::max_diff(step(linear, 0.0, dt, Method::midpoint).matrix(), diag_phase(0.5 * dt * dt)) <= 1e-14);
  }
  // Two-point Gauss (magnus4) integrates a cubic commuting coefficient exactly.
  const auto cubic = HamiltonianPath::scalar(Polynomial{{1.0, 0.0, -2.0, 4.0}}, HermitianMatrix(pauli::z()));
  const Polynomial antiderivative = Polynomial{{1.0, 0.0, -2.0, 4.0}}.integral();
  const double f = antiderivative(1.3) - antiderivative(0.4);
  CHECK(oracle::max_diff(step(cubic, 0.4, 0.9, Method::magnus4).matrix(), diag_phase(f)) <= 1e-13);
}

TEST_CASE("step errors") {
  const auto sampled = HamiltonianPath::sampled({0.0, 1.0}, {HermitianMatrix(pauli::z()), HermitianMatrix(pauli::x())});
  CHECK_THROWS_AS(step(sampled, 0.5, 0.0, Method::euler), Error);
  CHECK_THROWS_AS(step(sampled, 0.5, -0.1, Method::euler), Error);
  CHECK_THROWS_AS(step(sampled, 0.95, 0.1, Method::magnus4), Error);
  CHECK_THROWS_AS(step(sampled, -0.1, 0.05, Method::midpoint), Error);
  CHECK_NOTHROW(step(sampled, 0.9, 0.1, Method::magnus4));
}

TEST_CASE("transport of the zero generator is the identity") {
  for (Method m : kMethods) {
    const auto g = transport(zero_path(3), 0.0, 2.0, 10, m);
    CHECK(g.grid().size() == 11);
    for (const auto& u : g.unitaries()) CHECK(u.matrix() == ComplexMatrix::identity(3));
  }
}

TEST_CASE("commuting family matches exp(i F(t) sigma_z)") {
  const Polynomial linear{{0.5, 2.0}};
  const auto path = HamiltonianPath::scalar(linear, HermitianMatrix(pauli::z()));
  const auto g = transport(path, 0.0, 1.0, 50, Method::midpoint);
  double err = 0.0;
  for (std::size_t k = 0; k < g.grid().size(); ++k) {
    err = std::max(err, operator_norm(g.unitaries()[k].matrix() - diag_phase(linear.integral()(g.grid()[k]))));
  }
  CHECK(err <= 1e-13);

  // Quadratic coefficient: midpoint error is second order.
  const Polynomial quad{{0.0, 0.0, 3.0}};
  const auto qpath = HamiltonianPath::scalar(quad, HermitianMatrix(pauli::z()));
  auto terminal_error = [&](int steps) {
    const auto gq = transport(qpath, 0.0, 1.0, steps, Method::midpoint);
    return operator_norm(gq.final().matrix() - diag_phase(quad.integral()(1.0)));
  };
  const double ratio = terminal_error(40) / terminal_error(80);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("magnus4 on the benchmark agrees with a 1e5-step reference") {
  const auto path = benchmark_path();
  const ComplexMatrix reference = transport(path, 0.0, 1.0, 100000, Method::magnus4).final().matrix();
  const ComplexMatrix coarse = transport(path, 0.0, 1.0, 100, Method::magnus4).final().matrix();
  CHECK(operator_norm(coarse - reference) <= 1e-8);
}

TEST_CASE("every accumulated propagator is unitary") {
  const auto path = benchmark_path();
  for (Method m : kMethods) {
    const auto g = transport(path, 0.0, 1.0, 256, m);
    for (const auto& u : g.unitaries()) CHECK(unitarity_defect(u.matrix()) <= 1e-10);
    CHECK(g.unitaries().front().matrix() == ComplexMatrix::identity(2));
  }
}

TEST_CASE("transport composes across a split interval") {
  const auto path = benchmark_path();
  for (Method m : kMethods) {
    const auto whole = transport(path, 0.0, 1.0, 100, m);
    const auto first = transport(path, 0.0, 0.5, 50, m);
    const auto second = transport(path, 0.5, 1.0, 50, m);
    for (std::size_t j = 0; j < second.grid().size(); ++j) {
      const ComplexMatrix composed = second.unitaries()[j].matrix() * first.final().matrix();
      CHECK(operator_norm(whole.unitaries()[50 + j].matrix() - composed) <= 1e-10);
    }
  }
}

TEST_CASE("sign -1 gives the inverse flow for a constant generator") {
  CounterRng rng(2);
  const auto h = random_hermitian(rng, 3);
  const auto plus = transport(HamiltonianPath::constant(h, +1), 0.0, 1.0, 16, Method::magnus4);
  const auto minus = transport(HamiltonianPath::constant(h, -1), 0.0, 1.0, 16, Method::magnus4);
  CHECK(minus.sign() == -1);
  CHECK(operator_norm(minus.final().matrix() - adjoint(plus.final().matrix())) <= 1e-13);
  CHECK(operator_norm(minus.final().matrix() - oracle::exp_hermitian(h.matrix(), -kI)) <= 1e-12);
}

TEST_CASE("evolve_state") {
  const ComplexMatrix y = ComplexMatrix::column({0.6, cplx{0.0, 0.8}});
  const auto still = evolve_state(transport(zero_path(), 0.0, 1.0, 8, Method::euler), y);
  for (const auto& v : still.values()) CHECK(v == y);

  const auto conservative = HamiltonianPath::constant(HermitianMatrix(pauli::z()));
  const auto psi = evolve_state(transport(conservative, 0.0, 3.0, 300, Method::magnus4), ComplexMatrix::column({1.0, 0.0}));
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const ComplexMatrix exact = ComplexMatrix::column({std::exp(kI * psi.grid()[k]), 0.0});
    CHECK(frobenius_norm(psi.values()[k] - exact) <= 1e-12);
  }

  CounterRng rng(3);
  const ComplexMatrix z = random_matrix(rng, 2, 1);
  const auto moving = evolve_state(transport(benchmark_path(), 0.0, 1.0, 64, Method::midpoint), z);
  for (const auto& v : moving.values()) CHECK(std::abs(frobenius_norm(v) - frobenius_norm(z)) <= 1e-9 * frobenius_norm(z));

  const auto g = transport(conservative, 0.0, 1.0, 4, Method::euler);
  CHECK_THROWS_AS(evolve_state(g, ComplexMatrix::column({1.0, 0.0, 0.0})), Error);
  CHECK_THROWS_AS(evolve_state(g, ComplexMatrix::identity(2)), Error);
}

TEST_CASE("heisenberg_transport") {
  const auto conservative = HamiltonianPath::constant(HermitianMatrix(pauli::z()));
  const auto g = transport(conservative, 0.0, 2.0, 200, Method::magnus4);
  const auto identity_section = heisenberg_transport(g, ComplexMatrix::identity(2));
  // Only roundoff of the 200 accumulated products remains.
  for (const auto& v : identity_section.values()) {
    CHECK(oracle::max_diff(v, ComplexMatrix::identity(2)) <= 200 * 4 * kEps);
  }
  const auto alpha = heisenberg_transport(g, pauli::x());
  CHECK(alpha.values().front() == pauli::x());
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const double t = alpha.grid()[k];
    const ComplexMatrix exact = pauli::x() * std::cos(2.0 * t) - pauli::y() * std::sin(2.0 * t);
    CHECK(operator_norm(alpha.values()[k] - exact) <= 1e-12);
  }
  CounterRng rng(4);
  const ComplexMatrix a = random_matrix(rng, 2, 2);
  const auto still = heisenberg_transport(transport(zero_path(), 0.0, 1.0, 5, Method::euler), a);
  for (const auto& v : still.values()) {
    CHECK(v == a);
  }
  const auto moving = heisenberg_transport(transport(benchmark_path(), 0.0, 1.0, 64, Method::magnus4), a);
  for (const auto& v : moving.values()) {
    CHECK(std::abs(operator_norm(v) - operator_norm(a)) <= 1e-9 * operator_norm(a));
  }
  CHECK_THROWS_AS(heisenberg_transport(g, ComplexMatrix::identity(3)), Error);
}

TEST_CASE("Schrodinger residual") {
  const auto zero = zero_path();
  const ComplexMatrix y = ComplexMatrix::column({1.0, 2.0});
  const auto still = evolve_state(transport(zero, 0.0, 1.0, 10, Method::euler), y);
  // Stencil weights sum to zero up to rounding of the grid spacings.
  for (double r : schrodinger_residual(zero, still)) CHECK(r <= 64 * kEps * 2.0 / 0.1);

  // Exact solution: residual is pure truncation error, O(dt^2).
  const auto conservative = HamiltonianPath::constant(HermitianMatrix(pauli::z()));
  const double coarse = max_of(schrodinger_residual(conservative, exact_conservative_state(1.0, 100)));
  const double fine = max_of(schrodinger_residual(conservative, exact_conservative_state(1.0, 200)));
  CHECK(coarse / fine >= 3.5);
  CHECK(coarse / fine <= 4.5);
  // Interior points: 1 - sin(h)/h.
  const auto interior = schrodinger_residual(conservative, exact_conservative_state(1.0, 100));
  CHECK(interior[50] == doctest::Approx(1.0 - std::sin(0.01) / 0.01).epsilon(1e-6));

  // A magnus4 section has the residual of the exact one: FD error dominates.
  const auto psi = evolve_state(transport(conservative, 0.0, 1.0, 100, Method::magnus4), ComplexMatrix::column({1.0, 0.0}));
  const auto numeric = schrodinger_residual(conservative, psi);
  const auto exact = schrodinger_residual(conservative, exact_conservative_state(1.0, 100));
  for (std::size_t k = 0; k < numeric.size(); ++k) CHECK(std::abs(numeric[k] - exact[k]) <= 1e-10);

  const auto two_points = Section(SectionKind::state, {0.0, 1.0}, {y, y});
  CHECK_THROWS_AS(schrodinger_residual(zero, two_points), Error);
  const auto algebra = Section(SectionKind::algebra, {0.0, 0.5, 1.0}, std::vector<ComplexMatrix>(3, pauli::x()));
  CHECK_THROWS_AS(schrodinger_residual(zero, algebra), Error);
  const auto wrong_dim = Section(SectionKind::state, {0.0, 0.5, 1.0}, std::vector<ComplexMatrix>(3, ComplexMatrix(3, 1)));
  CHECK_THROWS_AS(schrodinger_residual(zero, wrong_dim), Error);
}

TEST_CASE("Heisenberg residual") {
  const auto zero = zero_path();
  const auto constant_section = Section(SectionKind::algebra, {0.0, 0.5, 1.0}, std::vector<ComplexMatrix>(3, pauli::x()));
  for (double r : heisenberg_residual(zero, constant_section)) CHECK(r == 0.0);

  const auto conservative = HamiltonianPath::constant(HermitianMatrix(pauli::z()));
  const double coarse = max_of(heisenberg_residual(conservative, exact_conservative_observable(1.0, 100)));
  const double fine = max_of(heisenberg_residual(conservative, exact_conservative_observable(1.0, 200)));
  CHECK(coarse / fine >= 3.5);
  CHECK(coarse / fine <= 4.5);

  const auto g = transport(conservative, 0.0, 1.0, 100, Method::magnus4);
  const auto numeric = heisenberg_residual(conservative, heisenberg_transport(g, pauli::x()));
  const auto exact = heisenberg_residual(conservative, exact_conservative_observable(1.0, 100));
  for (std::size_t k = 0; k < numeric.size(); ++k) CHECK(std::abs(numeric[k] - exact[k]) <= 1e-10);

  const auto state = Section(SectionKind::state, {0.0, 0.5, 1.0}, std::vector<ComplexMatrix>(3, ComplexMatrix(2, 1)));
  CHECK_THROWS_AS(heisenberg_residual(zero, state), Error);
}

TEST_CASE("connection_apply") {
  const auto path = benchmark_path();
  const auto g = transport(path, 0.0, 1.0, 200, Method::magnus4);
  const ComplexMatrix y = ComplexMatrix::column({1.0, 0.0});
  const auto psi = evolve_state(g, y);
  const auto applied = connection_apply(path, psi);
  for (const auto& v : applied.values()) CHECK(frobenius_norm(v) <= 1e-4);

  const auto zero = zero_path();
  const auto flat = Section(SectionKind::algebra, {0.0, 0.3, 0.9, 1.0}, std::vector<ComplexMatrix>(4, pauli::y()));
  const auto flat_applied = connection_apply(zero, flat);
  for (const auto& v : flat_applied.values()) CHECK(max_abs(v) == 0.0);

  // Leibniz rule against a scalar function: ∇(f psi) = f' psi + f ∇psi.
  const Polynomial f{{1.0, -0.5, 2.0}};
  const Polynomial df = f.derivative();
  std::vector<ComplexMatrix> scaled;
  for (std::size_t k = 0; k < psi.size(); ++k) scaled.push_back(psi.values()[k] * f(psi.grid()[k]));
  const auto lhs = connection_apply(path, Section(SectionKind::state, psi.grid(), scaled));
  const auto nabla_psi = connection_apply(path, psi);
  double worst = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double t = psi.grid()[k];
    const ComplexMatrix rhs = psi.values()[k] * df(t) + nabla_psi.values()[k] * f(t);
    worst = std::max(worst, frobenius_norm(lhs.values()[k] - rhs));
  }
  // Both sides are second-order accurate; with h = 5e-3 the mismatch is O(h^2).
  CHECK(worst <= 1e-3);
  CHECK(worst > 0.0);
}

TEST_CASE("connection_apply accepts non-uniform grids") {
  const auto conservative = HamiltonianPath::constant(HermitianMatrix(pauli::z()));
  std::vector<double> grid;
  std::vector<ComplexMatrix> values;
  for (int k = 0; k <= 40; ++k) {
    const double t = 0.025 * k + 0.004 * std::sin(3.0 * k);
    grid.push_back(t);
    values.push_back(ComplexMatrix::column({std::exp(kI * t), 0.0}));
  }
  const auto r = schrodinger_residual(conservative, Section(SectionKind::state, grid, values));
  CHECK(max_of(r) <= 1e-3);
}

TEST_CASE("picture equivalence on commuting families") {
  const Polynomial f{{0.3, -1.0, 0.5, 0.25, -0.1}};
  CounterRng rng(5);
  const auto h0 = random_hermitian(rng, 3);
  const auto path = HamiltonianPath::scalar(f, h0);
  const ComplexMatrix a = random_matrix(rng, 3, 3);
  const auto g = transport(path, 0.0, 1.0, 256, Method::magnus4);
  const auto alpha = heisenberg_transport(g, a);
  const auto via_super = heisenberg_by_superoperator(path, g.grid(), a);
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    CHECK(operator_norm(alpha.values()[k] - via_super.values()[k]) <= 1e-8);
  }
  CHECK_THROWS_AS(heisenberg_by_superoperator(benchmark_path(), g.grid(), pauli::x()), Error);
}

TEST_CASE("mean-value duality along the benchmark") {
  const auto g = transport(benchmark_path(), 0.0, 1.0, 256, Method::magnus4);
  const ComplexMatrix y = ComplexMatrix::column({1.0, 0.0});
  const auto psi = evolve_state(g, y);
  const auto beta = reverse_transport(g, pauli::x());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const cplx forward = inner_product(psi.values()[k], pauli::x() * psi.values()[k]);
    const cplx back = inner_product(y, beta.values()[k] * y);
    CHECK(std::abs(forward - back) <= 1e-10);
  }
}

TEST_CASE("section validation") {
  CHECK_THROWS_AS(Section(SectionKind::state, {0.0, 0.0}, std::vector<ComplexMatrix>(2, ComplexMatrix(2, 1))), Error);
  CHECK_THROWS_AS(Section(SectionKind::state, {0.0, 1.0}, std::vector<ComplexMatrix>(2, ComplexMatrix(2, 2))), Error);
  CHECK_THROWS_AS(Section(SectionKind::algebra, {0.0, 1.0}, {ComplexMatrix(2), ComplexMatrix(3)}), Error);
  CHECK_THROWS_AS(Section(SectionKind::algebra, {0.0}, {}), Error);
}
