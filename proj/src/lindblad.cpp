#include "qecqm/lindblad.hpp"

#include "qecqm/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace qecqm {

void LindbladModel::validate() const {
  if (generator.rows() != generator.cols() || generator.rows() == 0)
    throw DomainError("LindbladModel: generator must be square and nonempty");
  if (hermiticity_defect(generator) > 1e-10) throw DomainError("LindbladModel: generator is not Hermitian");
  for (std::size_t k = 0; k < jumps.size(); ++k)
    if (jumps[k].rows() != generator.rows() || jumps[k].cols() != generator.cols())
      throw DomainError("LindbladModel: jump " + std::to_string(k) + " dimension mismatch");
}

LindbladModel LindbladModel::embedded(std::size_t left_dim, std::size_t right_dim) const {
  const auto lift = [&](const ComplexOperator& op) {
    return tensor_product(tensor_product(named::identity(left_dim), op), named::identity(right_dim));
  };
  LindbladModel out;
  out.generator = lift(generator);
  out.coupling = coupling;
  for (const auto& l : jumps) out.jumps.push_back(lift(l));
  return out;
}

ComplexOperator lindblad_rhs(const LindbladModel& model, const ComplexOperator& rho) {
  if (static_cast<std::size_t>(rho.rows()) != model.dim() || rho.rows() != rho.cols())
    throw DomainError("lindblad_rhs: state dimension does not match model");
  const ComplexOperator h = model.hamiltonian();
  const Complex minus_i(0.0, -1.0);
  ComplexOperator out = minus_i * (h * rho - rho * h);
  for (const auto& l : model.jumps) {
    const ComplexOperator ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

ComplexOperator lindblad_rhs(const LindbladModel& model, const DensityState& rho) {
  return lindblad_rhs(model, rho.op());
}

ComplexOperator liouvillian_matrix(const LindbladModel& model) {
  const std::size_t d = model.dim();
  const ComplexOperator id = named::identity(d);
  const ComplexOperator h = model.hamiltonian();
  const Complex minus_i(0.0, -1.0);
  ComplexOperator sup = minus_i * (tensor_product(id, h) - tensor_product(h.transpose(), id));
  for (const auto& l : model.jumps) {
    const ComplexOperator ldl = l.adjoint() * l;
    sup += tensor_product(l.conjugate(), l);
    sup -= 0.5 * tensor_product(id, ldl);
    sup -= 0.5 * tensor_product(ldl.transpose(), id);
  }
  return sup;
}

ComplexOperator vectorize(const ComplexOperator& rho) {
  return Eigen::Map<const ComplexOperator>(rho.data(), rho.size(), 1);
}

ComplexOperator unvectorize(const ComplexOperator& vec, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Eigen::Map<const ComplexOperator>(vec.data(), n, n);
}

double liouvillian_spectral_radius(const LindbladModel& model) {
  const ComplexOperator sup = liouvillian_matrix(model);
  Eigen::ComplexEigenSolver<ComplexOperator> solver(sup, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::optional<std::string> step_size_warning(const LindbladModel& model, const EvolutionConfig& cfg) {
  const double radius = liouvillian_spectral_radius(model);
  const double h = cfg.dt / cfg.substeps;
  if (radius > 0.0 && h > 1e-2 / radius) {
    std::ostringstream os;
    os << "step " << h << " exceeds recommended bound " << 1e-2 / radius
       << " (Liouvillian spectral radius " << radius << ")";
    return os.str();
  }
  return std::nullopt;
}

Propagator::Propagator(LindbladModel model, EvolutionConfig cfg, double duration)
    : model_(std::move(model)), cfg_(cfg), duration_(duration) {
  model_.validate();
  if (!(duration >= 0.0)) throw DomainError("evolve: duration must be nonnegative");
  if (!(cfg_.dt > 0.0) || cfg_.substeps < 1) throw DomainError("evolve: dt must be positive and substeps >= 1");

  if (cfg_.method == Integrator::liouvillian_exponential) {
    superop_ = (liouvillian_matrix(model_) * duration_).exp();
    return;
  }
  const double h_max = cfg_.dt / cfg_.substeps;
  steps_ = duration_ == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(duration_ / h_max - 1e-9));
  effective_h_ = model_.hamiltonian();
  for (const auto& l : model_.jumps) effective_h_ -= Complex(0.0, 0.5) * (l.adjoint() * l);
}

ComplexOperator Propagator::apply(const ComplexOperator& rho) const {
  if (static_cast<std::size_t>(rho.rows()) != model_.dim())
    throw DomainError("evolve: state dimension does not match model");
  if (cfg_.method == Integrator::liouvillian_exponential)
    return unvectorize(superop_ * vectorize(rho), model_.dim());

  const Complex minus_i(0.0, -1.0);
  const ComplexOperator heff_dag = effective_h_.adjoint();
  const auto rhs = [&](const ComplexOperator& r) {
    ComplexOperator out = minus_i * (effective_h_ * r - r * heff_dag);
    for (const auto& l : model_.jumps) out.noalias() += l * r * l.adjoint();
    return out;
  };
  const double h = steps_ ? duration_ / static_cast<double>(steps_) : 0.0;
  ComplexOperator r = rho;
  for (std::size_t s = 0; s < steps_; ++s) {
    const ComplexOperator k1 = rhs(r);
    const ComplexOperator k2 = rhs(r + 0.5 * h * k1);
    const ComplexOperator k3 = rhs(r + 0.5 * h * k2);
    const ComplexOperator k4 = rhs(r + h * k3);
    r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return r;
}

DensityState checked_state(const ComplexOperator& rho, const SubsystemDims& dims) {
  const ComplexOperator sym = 0.5 * (rho + rho.adjoint());
  const double lmin = min_eigenvalue(sym);
  if (lmin < kEvolvePositivityTol) {
    std::ostringstream os;
    os << "evolve: positivity lost, eigenvalue " << lmin << " below " << kEvolvePositivityTol;
    throw NumericalInstabilityError(os.str(), lmin);
  }
  const double tr = sym.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "evolve: trace drifted to " << tr;
    throw NumericalInstabilityError(os.str(), lmin);
  }
  return DensityState(std::move(sym), dims, StateTolerances{1e-12, 1e-10, kEvolvePositivityTol});
}

DensityState evolve(const LindbladModel& model, const DensityState& rho0, const EvolutionConfig& cfg,
                    double duration) {
  const Propagator prop(model, cfg, duration);
  return checked_state(prop.apply(rho0.op()), rho0.subsystem_dims());
}

}  // namespace qecqm
