#pragma once

#include <string>
#include <string_view>

#include "transportq/scenarios.h"

namespace transportq {

/// A parsed configuration document: the scenario plus output locations.
///
/// JSON schema (unknown keys are rejected at every level):
///
///   {
///     "name": "conservative",
///     "hamiltonian": {
///       "kind": "constant" | "scalar" | "pauli_sum" | "sampled" | "random",
///       "matrix": M,                                  // constant, scalar
///       "coefficients": [c0, c1, ...],                // scalar
///       "terms": [{"coefficients": [...], "matrix": M}, ...],  // pauli_sum
///       "times": [...], "matrices": [M, ...],         // sampled
///       "dim": n                                      // random (uses seed)
///     },
///     "sign": 1,                 // default +1
///     "initial_state": [z, ...] | "random",
///     "initial_observable": M | "random",
///     "t_final": 1.0,
///     "steps": 256,              // default 256
///     "method": "magnus4",       // default
///     "seed": 0,
///     "output": {"csv": "out.csv", "json": "out.json"}
///   }
///
/// M is a row-major nested array; a complex entry z is a number or [re, im].
struct ScenarioConfig {
  Scenario scenario;
  std::string csv_path{};
  std::string json_path{};
  /// Source description of the Hamiltonian, kept for serialization of the
  /// "random" kind (which is regenerated from the seed).
  std::string hamiltonian_kind{};
  std::size_t random_dim = 0;
  bool random_state = false;
  bool random_observable = false;
};

/// Throws Errc::config with a located message ("hamiltonian.matrix: ...").
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
/// JSON text that parse_config maps back to an identical Scenario.
std::string serialize_config(const ScenarioConfig& config);

}  // namespace transportq
