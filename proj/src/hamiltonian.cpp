#include "transportq/hamiltonian.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "transportq/errors.h"

namespace transportq {

double Polynomial::operator()(double t) const noexcept {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Polynomial Polynomial::integral() const {
  Polynomial out;
  out.coefficients.assign(coefficients.size() + 1, 0.0);
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    out.coefficients[k + 1] = coefficients[k] / static_cast<double>(k + 1);
  }
  return out;
}

Polynomial Polynomial::derivative() const {
  Polynomial out;
  for (std::size_t k = 1; k < coefficients.size(); ++k) {
    out.coefficients.push_back(coefficients[k] * static_cast<double>(k));
  }
  return out;
}

namespace {

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw domain_error("sign must be +1 or -1, got " + std::to_string(sign));
}

void check_polynomial(const Polynomial& p) {
  for (double c : p.coefficients) {
    if (!std::isfinite(c)) throw domain_error("polynomial coefficient is not finite");
  }
}

bool commute(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double scale = std::max(1.0, operator_norm(a) * operator_norm(b));
  return operator_norm(commutator(a, b)) <= 1e-12 * scale;
}

}  // namespace

HamiltonianPath HamiltonianPath::constant(HermitianMatrix h0, int sign) {
  check_sign(sign);
  HamiltonianPath path(Kind::constant, sign, h0.dim());
  path.terms_.push_back({Polynomial{{1.0}}, std::move(h0)});
  return path;
}

HamiltonianPath HamiltonianPath::scalar(Polynomial f, HermitianMatrix h0, int sign) {
  check_sign(sign);
  check_polynomial(f);
  HamiltonianPath path(Kind::scalar, sign, h0.dim());
  path.terms_.push_back({std::move(f), std::move(h0)});
  return path;
}

HamiltonianPath HamiltonianPath::pauli_sum(std::vector<PathTerm> terms, int sign) {
  check_sign(sign);
  if (terms.empty()) throw domain_error("pauli_sum path needs at least one term");
  const std::size_t n = terms.front().matrix.dim();
  for (const auto& term : terms) {
    check_polynomial(term.coefficient);
    if (term.matrix.dim() != n) throw dimension_error("pauli_sum terms have different dimensions");
  }
  HamiltonianPath path(Kind::pauli_sum, sign, n);
  path.terms_ = std::move(terms);
  return path;
}

HamiltonianPath HamiltonianPath::sampled(std::vector<double> times, std::vector<HermitianMatrix> samples, int sign) {
  check_sign(sign);
  if (times.size() < 2) throw domain_error("sampled path needs at least two samples");
  if (times.size() != samples.size()) throw dimension_error("sampled path: times and samples differ in length");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw domain_error("sampled path: non-finite time");
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw domain_error("sampled path: grid is not strictly increasing at index " + std::to_string(k));
    }
  }
  const std::size_t n = samples.front().dim();
  for (const auto& s : samples) {
    if (s.dim() != n) throw dimension_error("sampled path: samples have different dimensions");
  }
  HamiltonianPath path(Kind::sampled, sign, n);
  path.times_ = std::move(times);
  path.samples_ = std::move(samples);
  return path;
}

double HamiltonianPath::domain_begin() const noexcept {
  return kind_ == Kind::sampled ? times_.front() : -std::numeric_limits<double>::infinity();
}

double HamiltonianPath::domain_end() const noexcept {
  return kind_ == Kind::sampled ? times_.back() : std::numeric_limits<double>::infinity();
}

bool HamiltonianPath::contains(double t) const noexcept {
  return std::isfinite(t) && t >= domain_begin() && t <= domain_end();
}

HermitianMatrix HamiltonianPath::at(double t) const {
  if (!contains(t)) {
    throw domain_error("H(t) evaluated at t = " + sci(t) + " outside [" + sci(domain_begin()) + ", " +
                       sci(domain_end()) + "]");
  }
  if (kind_ == Kind::sampled) {
    auto hi = std::upper_bound(times_.begin(), times_.end(), t);
    if (hi == times_.end()) return samples_.back();
    const auto k = static_cast<std::size_t>(hi - times_.begin()) - 1;
    const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
    return HermitianMatrix(samples_[k].matrix() * (1.0 - w) + samples_[k + 1].matrix() * w);
  }
  ComplexMatrix h(dim_);
  for (const auto& term : terms_) h += term.matrix.matrix() * term.coefficient(t);
  return HermitianMatrix(std::move(h));
}

ComplexMatrix HamiltonianPath::generator(double t) const {
  return at(t).matrix() * cplx{0.0, static_cast<double>(sign_)};
}

bool HamiltonianPath::is_commuting() const {
  if (kind_ == Kind::constant || kind_ == Kind::scalar) return true;
  if (kind_ == Kind::pauli_sum) {
    for (std::size_t i = 0; i < terms_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (!commute(terms_[i].matrix.matrix(), terms_[j].matrix.matrix())) return false;
    return true;
  }
  for (std::size_t i = 0; i < samples_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!commute(samples_[i].matrix(), samples_[j].matrix())) return false;
  return true;
}

ComplexMatrix HamiltonianPath::integrated(double t0, double t1) const {
  if (!contains(t0) || !contains(t1)) throw domain_error("integrated: interval outside the path domain");
  if (kind_ != Kind::sampled) {
    ComplexMatrix out(dim_);
    for (const auto& term : terms_) {
      const Polynomial antiderivative = term.coefficient.integral();
      out += term.matrix.matrix() * (antiderivative(t1) - antiderivative(t0));
    }
    return out;
  }
  const double sign = t1 >= t0 ? 1.0 : -1.0;
  const double lo = std::min(t0, t1);
  const double hi = std::max(t0, t1);
  // Trapezoid rule on every linear piece meeting [lo, hi] is exact.
  std::vector<double> knots{lo};
  for (double t : times_) {
    if (t > lo && t < hi) knots.push_back(t);
  }
  knots.push_back(hi);
  ComplexMatrix out(dim_);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double width = knots[k + 1] - knots[k];
    out += (at(knots[k]).matrix() + at(knots[k + 1]).matrix()) * (0.5 * width);
  }
  return out * sign;
}

HamiltonianPath HamiltonianPath::with_sign(int sign) const {
  check_sign(sign);
  HamiltonianPath copy = *this;
  copy.sign_ = sign;
  return copy;
}

std::string to_string(HamiltonianPath::Kind kind) {
  switch (kind) {
    case HamiltonianPath::Kind::constant: return "constant";
    case HamiltonianPath::Kind::scalar: return "scalar";
    case HamiltonianPath::Kind::pauli_sum: return "pauli_sum";
    case HamiltonianPath::Kind::sampled: return "sampled";
  }
  return "unknown";
}

}  // namespace transportq
