#pragma once

#include "qecqm/lindblad.hpp"
#include "qecqm/operator_algebra.hpp"
#include "qecqm/span_codes.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qecqm {

enum class ProtocolKind { none, cnot_propagation, prop1_projective };
enum class AncillaRefresh { fresh_each_round, persistent };

std::string to_string(ProtocolKind kind);
std::string to_string(AncillaRefresh refresh);

/// One round of the sequential scheme on probe (x) one ancilla qubit:
/// encode, free evolution of the probe, optional recovery, decode.
struct RoundProtocol {
  ProtocolKind kind = ProtocolKind::none;
  std::size_t probe_dim = 2;
  ComplexOperator encode;
  ComplexOperator decode;
  std::optional<KrausSet> recovery;
  AncillaRefresh ancilla_refresh = AncillaRefresh::fresh_each_round;
  /// Generator of the ideal noiseless probe evolution the protocol should reproduce.
  ComplexOperator ideal_generator;

  void validate() const;
};

/// CNOT on n qubits, 0-based indices, qubit 0 leftmost.
ComplexOperator cnot(std::size_t control, std::size_t target, std::size_t n_qubits);

/// Identity encode/decode; the ideal generator is the model's own.
RoundProtocol make_trivial_protocol(const LindbladModel& model);
/// E = CNOT(0->1), D = CNOT(1->0) CNOT(0->1) on a qubit probe. Bit flips on the
/// probe move to the ancilla; the ideal generator is the computational-basis
/// diagonal of the model's generator.
RoundProtocol make_cnot_protocol(const LindbladModel& model);
/// Encode into the {c0 +, c1 -} code of the generator's perpendicular part,
/// recover from {I, L_k (x) I} each round, decode. Throws PreconditionError when
/// no rank-2 perpendicular component exists.
RoundProtocol make_projective_protocol(const LindbladModel& model);
RoundProtocol make_protocol(ProtocolKind kind, const LindbladModel& model);

struct PropagationResidual {
  std::string label;
  double residual = 0.0;
};

struct ErrorPropagationReport {
  std::vector<PropagationResidual> residuals;
  double max_residual = 0.0;
  bool passed = false;
};

/// D (X (x) I) E |+-,0> = |+-,1>, D (Z (x) I) E |+-,0> = |-+,0>, D E |+-,0> = |+-,0>.
ErrorPropagationReport error_propagation_check(const RoundProtocol& protocol, double tol = 1e-12);

/// Full round channel on [spectators..., probe, ancilla]. Gates are
/// instantaneous; the model acts on the probe factor only.
class RoundChannel {
 public:
  RoundChannel(const LindbladModel& model, const RoundProtocol& protocol, const EvolutionConfig& cfg,
               std::size_t spectator_dim = 1);

  struct Stages {
    ComplexOperator encoded;  // after encode
    ComplexOperator evolved;  // after evolution and recovery, before decode
    ComplexOperator decoded;
  };

  Stages stages(const ComplexOperator& joint) const;
  ComplexOperator apply(const ComplexOperator& joint) const;

 private:
  std::size_t spectator_dim_;
  std::size_t probe_dim_;
  ComplexOperator encode_, decode_;
  std::optional<KrausSet> recovery_;
  Propagator propagator_;
};

DensityState run_round(const DensityState& state, const LindbladModel& model, const RoundProtocol& protocol,
                       const EvolutionConfig& cfg);

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  double time = 0.0;      // round * dt
  DensityState probe;     // after decode
  DensityState ancilla;   // after decode
  DensityState joint;     // right after encoding (round start)
  double min_pt_eigenvalue = 0.0;     // min over round start, pre-decode and post-decode
  double ideal_trace_distance = 0.0;  // probe vs ideal noiseless evolution
};

struct ProtocolTrace {
  std::vector<RoundRecord> rounds;
};

struct ProtocolOptions {
  /// White-noise weight s of the separable input family. When positive each
  /// round starts from (1/(1+s)) sigma (x) |0><0| + s/(4(1+s)) I, with sigma
  /// the signal component carried over from the previous round.
  double white_noise_s = 0.0;
};

ProtocolTrace run_protocol(const DensityState& rho0_probe, const LindbladModel& model,
                           const RoundProtocol& protocol, const EvolutionConfig& cfg, std::size_t kappa,
                           const ProtocolOptions& options = {});

/// (1/(1+s)) |theta><theta| (x) |0..0><0..0| + s / (2^(kappa+1) (1+s)) I on kappa+1 qubits.
DensityState separable_input_state(double theta, double s, std::size_t kappa);

/// Probe marginal of the ideal noiseless evolution exp(-i coupling G t).
ComplexOperator ideal_probe_state(const ComplexOperator& rho0_probe, const ComplexOperator& generator,
                                  double coupling, double t);

}  // namespace qecqm
