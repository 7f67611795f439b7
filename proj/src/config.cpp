#include "transportq/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "transportq/errors.h"
#include "transportq/random.h"
#include "transportq/tolerances.h"

namespace transportq {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  throw config_error(path + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail_at(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) fail_at(path.empty() ? key : path + "." + key, "unknown key '" + key + "'");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail_at(join(path, key), "missing required field");
  return obj.at(key);
}

double parse_real(const json& v, const std::string& path) {
  if (!v.is_number()) fail_at(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail_at(path, "not finite");
  return x;
}

cplx parse_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {parse_real(v, path), 0.0};
  if (v.is_array() && v.size() == 2) return {parse_real(v[0], path + "[0]"), parse_real(v[1], path + "[1]")};
  fail_at(path, "expected a number or a [re, im] pair");
}

ComplexMatrix parse_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail_at(path, "expected a non-empty row-major nested array");
  const std::size_t n = v.size();
  if (n > static_cast<std::size_t>(tol::kMaxDim)) fail_at(path, "dimension exceeds " + std::to_string(tol::kMaxDim));
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != n) fail_at(row_path, "expected a row of length " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_complex(v[i][j], row_path + "[" + std::to_string(j) + "]");
  }
  return m;
}

HermitianMatrix parse_hermitian(const json& v, const std::string& path) {
  ComplexMatrix m = parse_matrix(v, path);
  const auto defect = hermiticity_defect(m);
  if (defect.deviation > tol::kHermiticity * operator_norm(m)) {
    fail_at(path, "matrix is not Hermitian at (" + std::to_string(defect.row) + "," + std::to_string(defect.col) +
                      "): deviation " + sci(defect.deviation));
  }
  return HermitianMatrix(std::move(m));
}

Polynomial parse_polynomial(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail_at(path, "expected a non-empty coefficient list");
  Polynomial p;
  for (std::size_t k = 0; k < v.size(); ++k) p.coefficients.push_back(parse_real(v[k], path + "[" + std::to_string(k) + "]"));
  return p;
}

ComplexMatrix parse_state(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail_at(path, "expected a non-empty array of complex entries");
  std::vector<cplx> entries;
  for (std::size_t k = 0; k < v.size(); ++k) entries.push_back(parse_complex(v[k], path + "[" + std::to_string(k) + "]"));
  return ComplexMatrix::column(entries);
}

template <typename F>
auto located(const std::string& path, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.code() == Errc::config) throw;
    fail_at(path, e.what());
  }
}

HamiltonianPath parse_hamiltonian(const json& v, int sign, CounterRng& rng, ScenarioConfig& out) {
  const std::string path = "hamiltonian";
  reject_unknown_keys(v, path, {"kind", "matrix", "coefficients", "terms", "times", "matrices", "dim"});
  const json& kind_json = require(v, path, "kind");
  if (!kind_json.is_string()) fail_at(path + ".kind", "expected a string");
  const std::string kind = kind_json.get<std::string>();
  out.hamiltonian_kind = kind;

  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
      if (v.contains(key)) fail_at(join(path, key), "not allowed for kind '" + kind + "'");
    }
  };

  if (kind == "constant") {
    forbid({"coefficients", "terms", "times", "matrices", "dim"});
    HermitianMatrix h = parse_hermitian(require(v, path, "matrix"), path + ".matrix");
    return HamiltonianPath::constant(std::move(h), sign);
  }
  if (kind == "scalar") {
    forbid({"terms", "times", "matrices", "dim"});
    Polynomial f = parse_polynomial(require(v, path, "coefficients"), path + ".coefficients");
    HermitianMatrix h = parse_hermitian(require(v, path, "matrix"), path + ".matrix");
    return HamiltonianPath::scalar(std::move(f), std::move(h), sign);
  }
  if (kind == "pauli_sum") {
    forbid({"matrix", "coefficients", "times", "matrices", "dim"});
    const json& terms = require(v, path, "terms");
    if (!terms.is_array() || terms.empty()) fail_at(path + ".terms", "expected a non-empty array");
    std::vector<PathTerm> parsed;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string term_path = path + ".terms[" + std::to_string(k) + "]";
      reject_unknown_keys(terms[k], term_path, {"coefficients", "matrix"});
      Polynomial f = parse_polynomial(require(terms[k], term_path, "coefficients"), term_path + ".coefficients");
      HermitianMatrix h = parse_hermitian(require(terms[k], term_path, "matrix"), term_path + ".matrix");
      parsed.push_back({std::move(f), std::move(h)});
    }
    return located(path + ".terms", [&] { return HamiltonianPath::pauli_sum(std::move(parsed), sign); });
  }
  if (kind == "sampled") {
    forbid({"matrix", "coefficients", "terms", "dim"});
    const json& times = require(v, path, "times");
    const json& matrices = require(v, path, "matrices");
    if (!times.is_array()) fail_at(path + ".times", "expected an array");
    if (!matrices.is_array()) fail_at(path + ".matrices", "expected an array");
    std::vector<double> ts;
    for (std::size_t k = 0; k < times.size(); ++k) ts.push_back(parse_real(times[k], path + ".times[" + std::to_string(k) + "]"));
    std::vector<HermitianMatrix> hs;
    for (std::size_t k = 0; k < matrices.size(); ++k) {
      hs.push_back(parse_hermitian(matrices[k], path + ".matrices[" + std::to_string(k) + "]"));
    }
    return located(path, [&] { return HamiltonianPath::sampled(std::move(ts), std::move(hs), sign); });
  }
  if (kind == "random") {
    forbid({"matrix", "coefficients", "terms", "times", "matrices"});
    const json& dim = require(v, path, "dim");
    if (!dim.is_number_integer() || dim.get<long long>() < 1 || dim.get<long long>() > tol::kMaxDim) {
      fail_at(path + ".dim", "expected an integer in [1, " + std::to_string(tol::kMaxDim) + "]");
    }
    out.random_dim = dim.get<std::size_t>();
    return HamiltonianPath::constant(random_hermitian(rng, out.random_dim), sign);
  }
  fail_at(path + ".kind", "unknown kind '" + kind + "'");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw config_error(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown_keys(doc, "", {"name", "hamiltonian", "sign", "initial_state", "initial_observable", "t_final",
                                "steps", "method", "seed", "output"});

  ScenarioConfig out{.scenario = scenarios::conservative()};
  Scenario& s = out.scenario;
  s.initial_state.reset();
  s.initial_observable.reset();

  s.name = "scenario";
  if (doc.contains("name")) {
    if (!doc["name"].is_string() || doc["name"].get<std::string>().empty()) fail_at("name", "expected a non-empty string");
    s.name = doc["name"].get<std::string>();
  }

  int sign = 1;
  if (doc.contains("sign")) {
    if (!doc["sign"].is_number_integer() || (doc["sign"].get<int>() != 1 && doc["sign"].get<int>() != -1)) {
      fail_at("sign", "expected +1 or -1");
    }
    sign = doc["sign"].get<int>();
  }

  s.seed = 0;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail_at("seed", "expected a non-negative integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }

  s.method = Method::magnus4;
  if (doc.contains("method")) {
    const auto m = doc["method"].is_string() ? parse_method(doc["method"].get<std::string>()) : std::nullopt;
    if (!m) fail_at("method", "expected one of euler, midpoint, magnus4");
    s.method = *m;
  }

  s.steps = 256;
  if (doc.contains("steps")) {
    if (!doc["steps"].is_number_integer() || doc["steps"].get<long long>() < 2 ||
        doc["steps"].get<long long>() > 100'000'000) {
      fail_at("steps", "expected an integer >= 2");
    }
    s.steps = doc["steps"].get<int>();
  }

  s.t_final = parse_real(require(doc, "", "t_final"), "t_final");
  if (!(s.t_final > 0.0)) fail_at("t_final", "must be positive");

  CounterRng rng(s.seed);
  s.path = parse_hamiltonian(require(doc, "", "hamiltonian"), sign, rng, out);
  const std::size_t n = s.path.dim();

  if (doc.contains("initial_state")) {
    const json& v = doc["initial_state"];
    if (v.is_string() && v.get<std::string>() == "random") {
      out.random_state = true;
      s.initial_state = random_state(rng, n);
    } else {
      s.initial_state = parse_state(v, "initial_state");
    }
  }
  if (doc.contains("initial_observable")) {
    const json& v = doc["initial_observable"];
    if (v.is_string() && v.get<std::string>() == "random") {
      out.random_observable = true;
      s.initial_observable = random_hermitian(rng, n).matrix();
    } else {
      s.initial_observable = parse_matrix(v, "initial_observable");
    }
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    reject_unknown_keys(o, "output", {"csv", "json"});
    for (const char* key : {"csv", "json"}) {
      if (!o.contains(key)) continue;
      if (!o[key].is_string()) fail_at(join("output", key), "expected a path string");
    }
    if (o.contains("csv")) out.csv_path = o["csv"].get<std::string>();
    if (o.contains("json")) out.json_path = o["json"].get<std::string>();
  }

  located("scenario", [&] {
    s.validate();
    return 0;
  });
  return out;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

std::string serialize_config(const ScenarioConfig& config) {
  const Scenario& s = config.scenario;
  json doc;
  doc["name"] = s.name;
  doc["sign"] = s.path.sign();
  doc["t_final"] = s.t_final;
  doc["steps"] = s.steps;
  doc["method"] = to_string(s.method);
  doc["seed"] = s.seed;

  json h;
  if (config.hamiltonian_kind == "random") {
    h["kind"] = "random";
    h["dim"] = config.random_dim;
  } else {
    h["kind"] = to_string(s.path.kind());
    switch (s.path.kind()) {
      case HamiltonianPath::Kind::constant:
        h["matrix"] = matrix_to_json(s.path.terms().front().matrix.matrix());
        break;
      case HamiltonianPath::Kind::scalar:
        h["coefficients"] = s.path.terms().front().coefficient.coefficients;
        h["matrix"] = matrix_to_json(s.path.terms().front().matrix.matrix());
        break;
      case HamiltonianPath::Kind::pauli_sum:
        h["terms"] = json::array();
        for (const auto& term : s.path.terms()) {
          h["terms"].push_back({{"coefficients", term.coefficient.coefficients},
                                {"matrix", matrix_to_json(term.matrix.matrix())}});
        }
        break;
      case HamiltonianPath::Kind::sampled:
        h["times"] = s.path.sample_times();
        h["matrices"] = json::array();
        for (const auto& m : s.path.samples()) h["matrices"].push_back(matrix_to_json(m.matrix()));
        break;
    }
  }
  doc["hamiltonian"] = std::move(h);

  if (s.initial_state) {
    if (config.random_state) {
      doc["initial_state"] = "random";
    } else {
      json entries = json::array();
      for (std::size_t i = 0; i < s.initial_state->rows(); ++i) entries.push_back(complex_to_json((*s.initial_state)(i, 0)));
      doc["initial_state"] = std::move(entries);
    }
  }
  if (s.initial_observable) {
    doc["initial_observable"] = config.random_observable ? json("random") : matrix_to_json(*s.initial_observable);
  }
  if (!config.csv_path.empty() || !config.json_path.empty()) {
    json o = json::object();
    if (!config.csv_path.empty()) o["csv"] = config.csv_path;
    if (!config.json_path.empty()) o["json"] = config.json_path;
    doc["output"] = std::move(o);
  }
  return doc.dump(2);
}

}  // namespace transportq
