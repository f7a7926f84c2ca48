#pragma once

#include "qecqm/operator_algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qecqm {

/// Signal Hamiltonian coupling * generator plus dissipative jump operators.
struct LindbladModel {
  ComplexOperator generator;
  double coupling = 1.0;
  std::vector<ComplexOperator> jumps;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(generator.rows()); }
  ComplexOperator hamiltonian() const { return coupling * generator; }
  /// Throws DomainError if the generator is not Hermitian or a jump has the wrong shape.
  void validate() const;
  /// Same dynamics on the middle factor of left (x) this (x) right.
  LindbladModel embedded(std::size_t left_dim, std::size_t right_dim) const;
};

enum class Integrator { runge_kutta_4, liouvillian_exponential };

struct EvolutionConfig {
  double dt = 1e-2;       // round duration
  int substeps = 10;      // RK4 steps per round
  Integrator method = Integrator::liouvillian_exponential;
};

ComplexOperator lindblad_rhs(const LindbladModel& model, const ComplexOperator& rho);
ComplexOperator lindblad_rhs(const LindbladModel& model, const DensityState& rho);

/// dim^2 x dim^2 superoperator, column-stacking: vec(A X B) = (B^T (x) A) vec(X).
ComplexOperator liouvillian_matrix(const LindbladModel& model);

ComplexOperator vectorize(const ComplexOperator& rho);
ComplexOperator unvectorize(const ComplexOperator& vec, std::size_t dim);

double liouvillian_spectral_radius(const LindbladModel& model);

/// Non-empty when dt/substeps exceeds 1e-2 / spectral radius of the Liouvillian.
std::optional<std::string> step_size_warning(const LindbladModel& model, const EvolutionConfig& cfg);

/// Fixed-duration evolution map. The exponential method caches the
/// propagator; RK4 steps the state with h = duration / ceil(duration * substeps / dt).
class Propagator {
 public:
  Propagator(LindbladModel model, EvolutionConfig cfg, double duration);

  ComplexOperator apply(const ComplexOperator& rho) const;
  double duration() const noexcept { return duration_; }
  const LindbladModel& model() const noexcept { return model_; }

 private:
  LindbladModel model_;
  EvolutionConfig cfg_;
  double duration_;
  std::size_t steps_ = 0;
  ComplexOperator effective_h_;   // H - (i/2) sum L^dag L
  ComplexOperator superop_;       // exponential method only
};

inline constexpr double kEvolvePositivityTol = -1e-8;

/// Throws NumericalInstabilityError when the result has an eigenvalue
/// below -1e-8. Positivity is checked, never repaired.
DensityState evolve(const LindbladModel& model, const DensityState& rho0, const EvolutionConfig& cfg,
                    double duration);

/// Hermitizes, checks positivity and wraps an integrator output.
DensityState checked_state(const ComplexOperator& rho, const SubsystemDims& dims);

}  // namespace qecqm
