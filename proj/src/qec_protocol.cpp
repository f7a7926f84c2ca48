#include "qecqm/qec_protocol.hpp"

#include "qecqm/errors.hpp"

#include <cmath>

namespace qecqm {

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::none: return "none";
    case ProtocolKind::cnot_propagation: return "cnot_propagation";
    case ProtocolKind::prop1_projective: return "prop1_projective";
  }
  return "unknown";
}

std::string to_string(AncillaRefresh refresh) {
  return refresh == AncillaRefresh::fresh_each_round ? "fresh_each_round" : "persistent";
}

void RoundProtocol::validate() const {
  const auto joint = static_cast<Eigen::Index>(2 * probe_dim);
  if (encode.rows() != joint || decode.rows() != joint)
    throw DomainError("RoundProtocol: encode/decode must act on probe (x) ancilla");
  if (!is_unitary(encode, 1e-10)) throw DomainError("RoundProtocol: encode is not unitary");
  if (!is_unitary(decode, 1e-10)) throw DomainError("RoundProtocol: decode is not unitary");
  if (static_cast<std::size_t>(ideal_generator.rows()) != probe_dim)
    throw DomainError("RoundProtocol: ideal generator must act on the probe");
}

ComplexOperator cnot(std::size_t control, std::size_t target, std::size_t n_qubits) {
  if (control == target) throw DomainError("cnot: control and target coincide");
  if (control >= n_qubits || target >= n_qubits) throw DomainError("cnot: qubit index out of range");
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t cbit = std::size_t{1} << (n_qubits - 1 - control);
  const std::size_t tbit = std::size_t{1} << (n_qubits - 1 - target);
  ComplexOperator u = ComplexOperator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t row = (col & cbit) ? (col ^ tbit) : col;
    u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  }
  return u;
}

RoundProtocol make_trivial_protocol(const LindbladModel& model) {
  model.validate();
  RoundProtocol p;
  p.kind = ProtocolKind::none;
  p.probe_dim = model.dim();
  p.encode = named::identity(2 * p.probe_dim);
  p.decode = p.encode;
  p.ideal_generator = model.generator;
  return p;
}

RoundProtocol make_cnot_protocol(const LindbladModel& model) {
  model.validate();
  if (model.dim() != 2) throw DomainError("make_cnot_protocol: the CNOT protocol needs a qubit probe");
  RoundProtocol p;
  p.kind = ProtocolKind::cnot_propagation;
  p.probe_dim = 2;
  p.encode = cnot(0, 1, 2);
  p.decode = cnot(1, 0, 2) * cnot(0, 1, 2);
  p.ideal_generator = model.generator.diagonal().asDiagonal();
  return p;
}

RoundProtocol make_projective_protocol(const LindbladModel& model) {
  model.validate();
  const auto d = model.dim();
  const LindbladSpan span = build_span(model.jumps, d);
  const GeneratorDecomposition dec = decompose_generator(model.generator, span);
  const SectorCodespaces codes = sector_codespaces(dec);

  std::vector<ComplexOperator> errors{named::identity(2 * d)};
  for (const auto& l : model.jumps) errors.push_back(lift_to_probe(l));

  RoundProtocol p;
  p.kind = ProtocolKind::prop1_projective;
  p.probe_dim = d;
  p.encode = sector_encoder(dec);
  p.decode = p.encode.adjoint();
  p.recovery = kl_recovery(codes.plus, errors);

  const ComplexOperator p0 = projector(*dec.c0), p1 = projector(*dec.c1);
  const ComplexOperator rest = named::identity(d) - p0 - p1;
  const Complex g0 = dec.c0->dot(model.generator * *dec.c0);
  const Complex g1 = dec.c1->dot(model.generator * *dec.c1);
  p.ideal_generator = g0.real() * p0 + g1.real() * p1 + rest * model.generator * rest;
  return p;
}

RoundProtocol make_protocol(ProtocolKind kind, const LindbladModel& model) {
  switch (kind) {
    case ProtocolKind::none: return make_trivial_protocol(model);
    case ProtocolKind::cnot_propagation: return make_cnot_protocol(model);
    case ProtocolKind::prop1_projective: return make_projective_protocol(model);
  }
  throw DomainError("make_protocol: unknown kind");
}

ErrorPropagationReport error_propagation_check(const RoundProtocol& protocol, double tol) {
  if (protocol.kind != ProtocolKind::cnot_propagation)
    throw PreconditionError("error_propagation_check: protocol is not the CNOT propagation protocol");
  using namespace named;
  const ComplexOperator id2 = identity(2);
  const ComplexOperator x1 = tensor_product(pauli_x(), id2);
  const ComplexOperator z1 = tensor_product(pauli_z(), id2);
  const ComplexOperator i4 = identity(4);

  struct Case {
    const char* label;
    const ComplexOperator* error;
    StateVector input;
    StateVector expected;
  };
  const Case cases[] = {
      {"X1 |+,0>", &x1, tensor_product(ket_plus(), ket0()), tensor_product(ket_plus(), ket1())},
      {"X1 |-,0>", &x1, tensor_product(ket_minus(), ket0()), tensor_product(ket_minus(), ket1())},
      {"Z1 |+,0>", &z1, tensor_product(ket_plus(), ket0()), tensor_product(ket_minus(), ket0())},
      {"Z1 |-,0>", &z1, tensor_product(ket_minus(), ket0()), tensor_product(ket_plus(), ket0())},
      {"I |+,0>", &i4, tensor_product(ket_plus(), ket0()), tensor_product(ket_plus(), ket0())},
      {"I |-,0>", &i4, tensor_product(ket_minus(), ket0()), tensor_product(ket_minus(), ket0())},
  };

  ErrorPropagationReport report;
  for (const auto& c : cases) {
    const StateVector out = protocol.decode * (*c.error) * protocol.encode * c.input;
    const double r = (out - c.expected).norm();
    report.residuals.push_back({c.label, r});
    report.max_residual = std::max(report.max_residual, r);
  }
  report.passed = report.max_residual <= tol;
  return report;
}

// ---------------------------------------------------------------------------

namespace {

// Applies a probe-local linear map to every probe block of [left, probe, right].
ComplexOperator apply_on_probe(const Propagator& prop, const ComplexOperator& rho, std::size_t left, std::size_t d,
                               std::size_t right) {
  const std::size_t outer = left * right;
  if (outer == 1) return prop.apply(rho);
  const auto index = [&](std::size_t o, std::size_t p) {
    return static_cast<Eigen::Index>(((o / right) * d + p) * right + o % right);
  };
  ComplexOperator out(rho.rows(), rho.cols());
  ComplexOperator block(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t a = 0; a < outer; ++a)
    for (std::size_t b = 0; b < outer; ++b) {
      for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q)
          block(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = rho(index(a, p), index(b, q));
      const ComplexOperator mapped = prop.apply(block);
      for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q)
          out(index(a, p), index(b, q)) = mapped(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
    }
  return out;
}

}  // namespace

RoundChannel::RoundChannel(const LindbladModel& model, const RoundProtocol& protocol, const EvolutionConfig& cfg,
                           std::size_t spectator_dim)
    : spectator_dim_(spectator_dim), probe_dim_(model.dim()), propagator_(model, cfg, cfg.dt) {
  protocol.validate();
  if (model.dim() != protocol.probe_dim) throw DomainError("RoundChannel: model and protocol probe dimensions differ");
  const ComplexOperator left = named::identity(spectator_dim);
  encode_ = tensor_product(left, protocol.encode);
  decode_ = tensor_product(left, protocol.decode);
  if (protocol.recovery) {
    recovery_.emplace();
    for (const auto& k : *protocol.recovery) recovery_->push_back(tensor_product(left, k));
  }
}

RoundChannel::Stages RoundChannel::stages(const ComplexOperator& joint) const {
  Stages s;
  s.encoded = conjugate_by(encode_, joint);
  s.evolved = apply_on_probe(propagator_, s.encoded, spectator_dim_, probe_dim_, 2);
  if (recovery_) s.evolved = apply_kraus(*recovery_, s.evolved);
  s.decoded = conjugate_by(decode_, s.evolved);
  return s;
}

ComplexOperator RoundChannel::apply(const ComplexOperator& joint) const { return stages(joint).decoded; }

DensityState run_round(const DensityState& state, const LindbladModel& model, const RoundProtocol& protocol,
                       const EvolutionConfig& cfg) {
  const auto& dims = state.subsystem_dims();
  if (dims.size() < 2 || dims.back() != 2 || dims[dims.size() - 2] != protocol.probe_dim)
    throw DomainError("run_round: state must end with (probe, qubit ancilla) factors");
  const std::size_t spectators = state.dim() / (2 * protocol.probe_dim);
  const RoundChannel channel(model, protocol, cfg, spectators);
  return checked_state(channel.apply(state.op()), dims);
}

// ---------------------------------------------------------------------------

namespace {

double pt_min(const ComplexOperator& joint, const SubsystemDims& dims) {
  return min_eigenvalue(partial_transpose(joint, dims, 1));
}

ComplexOperator ancilla_zero() { return projector(named::ket0()); }

}  // namespace

ComplexOperator ideal_probe_state(const ComplexOperator& rho0_probe, const ComplexOperator& generator,
                                  double coupling, double t) {
  const auto eig = hermitian_eig(generator);
  Eigen::VectorXcd phases(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::polar(1.0, -coupling * eig.eigenvalues(i) * t);
  const ComplexOperator u = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
  return conjugate_by(u, rho0_probe);
}

ProtocolTrace run_protocol(const DensityState& rho0_probe, const LindbladModel& model, const RoundProtocol& protocol,
                           const EvolutionConfig& cfg, std::size_t kappa, const ProtocolOptions& options) {
  if (kappa < 1) throw DomainError("run_protocol: kappa must be at least 1");
  if (rho0_probe.dim() != protocol.probe_dim) throw DomainError("run_protocol: probe state has the wrong dimension");
  const double s = options.white_noise_s;
  if (s < 0.0) throw DomainError("run_protocol: white-noise weight must be nonnegative");
  if (s > 0.0 && protocol.ancilla_refresh != AncillaRefresh::fresh_each_round)
    throw DomainError("run_protocol: the mixed-input protocol needs a fresh ancilla each round");

  const std::size_t d = protocol.probe_dim;
  const SubsystemDims joint_dims{d, 2};
  const RoundChannel channel(model, protocol, cfg);
  const ComplexOperator white = named::identity(2 * d) / static_cast<double>(2 * d);
  const ComplexOperator probe_white = named::identity(d) / static_cast<double>(d);
  const double w_signal = 1.0 / (1.0 + s);
  const double w_white = s / (1.0 + s);

  const ComplexOperator ideal0 = w_signal * rho0_probe.op() + w_white * probe_white;
  const std::size_t probe_idx[] = {0};
  const std::size_t anc_idx[] = {1};

  ProtocolTrace trace;
  trace.rounds.reserve(kappa);
  ComplexOperator signal = rho0_probe.op();
  ComplexOperator carried_joint = tensor_product(signal, ancilla_zero());

  for (std::size_t k = 1; k <= kappa; ++k) {
    ComplexOperator input;
    if (protocol.ancilla_refresh == AncillaRefresh::persistent) {
      input = carried_joint;
    } else {
      input = w_signal * tensor_product(signal, ancilla_zero()) + w_white * white;
    }

    const auto st = channel.stages(input);
    const DensityState decoded = checked_state(st.decoded, joint_dims);
    DensityState probe = partial_trace(decoded, probe_idx);
    DensityState ancilla = partial_trace(decoded, anc_idx);

    const double min_pt = std::min({pt_min(st.encoded, joint_dims), pt_min(st.evolved, joint_dims),
                                    pt_min(st.decoded, joint_dims)});

    if (s > 0.0) {
      const ComplexOperator next = channel.apply(tensor_product(signal, ancilla_zero()));
      signal = partial_trace(next, joint_dims, probe_idx);
    } else {
      signal = probe.op();
    }
    carried_joint = decoded.op();

    const double t = static_cast<double>(k) * cfg.dt;
    const double td = trace_distance(probe.op(), ideal_probe_state(ideal0, protocol.ideal_generator, model.coupling, t));
    trace.rounds.push_back(RoundRecord{k, t, std::move(probe), std::move(ancilla),
                                       checked_state(st.encoded, joint_dims), min_pt, td});
  }
  return trace;
}

DensityState separable_input_state(double theta, double s, std::size_t kappa) {
  if (s < 0.0) throw DomainError("separable_input_state: s must be nonnegative");
  if (kappa < 1) throw DomainError("separable_input_state: kappa must be at least 1");
  if (kappa > 12) throw DomainError("separable_input_state: kappa too large to materialize");
  StateVector pure = named::ket_theta(theta);
  for (std::size_t k = 0; k < kappa; ++k) pure = tensor_product(pure, named::ket0());
  const auto dim = static_cast<std::size_t>(pure.size());
  const ComplexOperator rho =
      projector(pure) / (1.0 + s) + (s / (static_cast<double>(dim) * (1.0 + s))) * named::identity(dim);
  return DensityState(rho, SubsystemDims(kappa + 1, 2));
}

}  // namespace qecqm
