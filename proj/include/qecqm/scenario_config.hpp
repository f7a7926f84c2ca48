#pragma once

#include "qecqm/lindblad.hpp"
#include "qecqm/operator_algebra.hpp"
#include "qecqm/qec_protocol.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qecqm {

/// Operator as written in a config: a named preset, a sum of Pauli strings,
/// an explicit matrix, or the generator built from jump `noise_index`.
struct OperatorSpec {
  enum class Kind { named, pauli_sum, matrix, from_noise };
  Kind kind = Kind::named;
  std::string name;
  std::vector<std::pair<std::string, double>> terms;  // sorted by Pauli string
  std::vector<std::vector<Complex>> matrix;
  std::size_t noise_index = 0;

  bool operator==(const OperatorSpec&) const = default;
};

struct StateSpec {
  enum class Kind { ket, bloch, theta, vector, separable_mixture };
  Kind kind = Kind::ket;
  std::string ket;  // "0", "1", "+", "-"
  std::array<double, 3> bloch{0.0, 0.0, 0.0};
  double theta = 0.0;  // also the ket angle of the separable mixture
  double s = 0.0;
  std::vector<Complex> vector;

  bool operator==(const StateSpec&) const = default;
};

struct Sweeps {
  std::vector<double> t, dt, s, theta;
  bool operator==(const Sweeps&) const = default;
};

struct NoiseGeneratorSpec {
  std::vector<std::size_t> dims;
  std::size_t samples = 100;
  bool operator==(const NoiseGeneratorSpec&) const = default;
};

inline constexpr std::uint64_t kDefaultScenarioSeed = 20240611;

struct ScenarioConfig {
  std::string name;
  std::string description;
  OperatorSpec generator;
  double theta = 1.0;
  std::vector<OperatorSpec> jumps;
  StateSpec initial_state;
  ProtocolKind protocol = ProtocolKind::none;
  AncillaRefresh ancilla_refresh = AncillaRefresh::fresh_each_round;
  std::size_t kappa = 1;
  double dt = 1e-2;
  std::size_t substeps = 10;
  Integrator method = Integrator::liouvillian_exponential;
  std::uint64_t seed = kDefaultScenarioSeed;
  Sweeps sweeps;
  std::vector<std::string> outputs;
  std::optional<NoiseGeneratorSpec> noise_generator;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Analyses a config may request.
const std::vector<std::string>& known_outputs();

/// Parses and validates; throws ConfigError listing every problem found.
/// Syntax errors carry line and column.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

ComplexOperator resolve_operator(const OperatorSpec& spec, const std::vector<ComplexOperator>& jumps,
                                 std::uint64_t seed);

struct ResolvedScenario {
  LindbladModel model;
  DensityState rho0;        // probe state; for the separable mixture, its signal part
  double white_noise_s = 0.0;
  EvolutionConfig evolution;
};

ResolvedScenario resolve_scenario(const ScenarioConfig& cfg);

std::string to_string(Integrator method);

}  // namespace qecqm
