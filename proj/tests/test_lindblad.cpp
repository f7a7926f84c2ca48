#include "doctest.h"
#include "oracles.hpp"

#include "qecqm/errors.hpp"
#include "qecqm/lindblad.hpp"
#include "qecqm/random_ops.hpp"

#include <cmath>

using namespace qecqm;
namespace nm = qecqm::named;

namespace {

double max_abs(const ComplexOperator& m) { return m.cwiseAbs().maxCoeff(); }

LindbladModel zx() { return LindbladModel{nm::pauli_z(), 1.0, {nm::pauli_x()}}; }

EvolutionConfig cfg_with(Integrator m, double dt = 1e-2, int substeps = 10) { return EvolutionConfig{dt, substeps, m}; }

}  // namespace

TEST_CASE("right-hand side examples") {
  const ComplexOperator plus = projector(nm::ket_plus());
  const ComplexOperator z = nm::pauli_z();
  const ComplexOperator x = nm::pauli_x();
  const ComplexOperator commutator = Complex(0, -1) * (z * plus - plus * z);

  CHECK(max_abs(x * plus * x - plus) <= 1e-14);
  CHECK(max_abs(lindblad_rhs(zx(), plus) - commutator) <= 1e-12);

  const LindbladModel unitary{z, 1.0, {}};
  CHECK(max_abs(lindblad_rhs(unitary, nm::identity(2) / 2.0)) == 0.0);

  const ComplexOperator zero = projector(nm::ket0());
  CHECK(max_abs(lindblad_rhs(zx(), zero) - (projector(nm::ket1()) - zero)) <= 1e-15);

  CHECK_THROWS_AS(lindblad_rhs(zx(), nm::identity(3) / 3.0), DomainError);
}

TEST_CASE("right-hand side is Hermitian, traceless, and matches the term-by-term oracle") {
  for (std::uint64_t i = 0; i < 40; ++i) {
    Rng rng = stream_rng(101, i);
    const std::size_t d = 2 + i % 3;
    LindbladModel m{random_hermitian(d, rng), 0.7, {random_ginibre(d, rng), random_ginibre(d, rng)}};
    const ComplexOperator rho = random_density(d, rng);
    const ComplexOperator rhs = lindblad_rhs(m, rho);
    CHECK(hermiticity_defect(rhs) <= 1e-12);
    CHECK(std::abs(rhs.trace()) <= 1e-12);
    CHECK(max_abs(rhs - oracle::lindblad_rhs(m.hamiltonian(), m.jumps, rho)) <= 1e-12);
  }
}

TEST_CASE("Liouvillian matrix") {
  const LindbladModel zero{ComplexOperator::Zero(2, 2), 1.0, {}};
  CHECK(max_abs(liouvillian_matrix(zero)) == 0.0);

  // Column stacking: vec(H rho) = (I (x) H) vec rho, vec(rho H) = (H^T (x) I) vec rho.
  const LindbladModel unitary{nm::pauli_z(), 1.0, {}};
  const ComplexOperator z = nm::pauli_z(), id = nm::identity(2);
  const ComplexOperator expected =
      Complex(0, -1) * (oracle::kron(id, z) - oracle::kron(ComplexOperator(z.transpose()), id));
  CHECK(max_abs(liouvillian_matrix(unitary) - expected) <= 1e-15);

  const ComplexOperator plus = projector(nm::ket_plus());
  CHECK(max_abs(unvectorize(liouvillian_matrix(zx()) * vectorize(plus), 2) - lindblad_rhs(zx(), plus)) <= 1e-12);

  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = stream_rng(111, i);
    LindbladModel m{random_hermitian(3, rng), 1.3, {random_ginibre(3, rng)}};
    const ComplexOperator rho = random_density(3, rng);
    CHECK(max_abs(unvectorize(liouvillian_matrix(m) * vectorize(rho), 3) - lindblad_rhs(m, rho)) <= 1e-12);
  }
}

TEST_CASE("evolution examples") {
  for (auto method : {Integrator::runge_kutta_4, Integrator::liouvillian_exponential}) {
    CAPTURE(static_cast<int>(method));
    const auto mixed = DensityState::maximally_mixed({2});
    CHECK(max_abs(evolve(zx(), mixed, cfg_with(method), 1.7).op() - mixed.op()) <= 1e-12);

    const LindbladModel unitary{nm::pauli_z(), 1.0, {}};
    const auto plus = DensityState::from_ket(nm::ket_plus());
    const auto out = evolve(unitary, plus, cfg_with(method, 1e-3, 1), M_PI / 4);
    const ComplexOperator ideal = oracle::diagonal_unitary_evolution(plus.op(), Eigen::Vector2d(1, -1), M_PI / 4);
    CHECK(oracle::trace_distance(out.op(), ideal) <= 1e-10);
    CHECK(purity(out.op()) == doctest::Approx(1.0).epsilon(1e-10));
  }

  const auto zero = DensityState::from_ket(nm::ket0());
  const ComplexOperator steady = oracle::steady_state(zx().hamiltonian(), zx().jumps);
  CHECK(max_abs(steady - nm::identity(2) / 2.0) <= 1e-12);
  const auto late = evolve(zx(), zero, cfg_with(Integrator::liouvillian_exponential), 40.0);
  CHECK(max_abs(late.op() - steady) <= 1e-12);
  CHECK(evolve(zx(), zero, cfg_with(Integrator::liouvillian_exponential), 0.0).op() == zero.op());
  CHECK_THROWS_AS(evolve(zx(), zero, {}, -1.0), DomainError);
}

TEST_CASE("trace and Hermiticity are conserved") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = stream_rng(121, i);
    LindbladModel m{random_hermitian(3, rng), 1.0, {random_ginibre(3, rng)}};
    const DensityState rho(random_density(3, rng), {3});
    for (auto method : {Integrator::runge_kutta_4, Integrator::liouvillian_exponential}) {
      const auto out = evolve(m, rho, cfg_with(method, 1e-3, 4), 0.5);
      CHECK(std::abs(out.op().trace() - 1.0) <= 1e-10);
      CHECK(hermiticity_defect(out.op()) <= 1e-10);
    }
  }
}

TEST_CASE("integrators agree") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = stream_rng(131, i);
    LindbladModel m{random_hermitian(2, rng), 1.0, {0.5 * random_ginibre(2, rng)}};
    const DensityState rho(random_density(2, rng), {2});
    // 100 steps per unit time or more.
    const auto a = evolve(m, rho, cfg_with(Integrator::runge_kutta_4, 1e-2, 1), 1.0);
    const auto b = evolve(m, rho, cfg_with(Integrator::liouvillian_exponential, 1e-2, 1), 1.0);
    CHECK(trace_distance(a.op(), b.op()) <= 1e-8);
  }
}

TEST_CASE("exponential semigroup property") {
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng = stream_rng(141, i);
    LindbladModel m{random_hermitian(3, rng), 1.0, {random_ginibre(3, rng)}};
    const DensityState rho(random_density(3, rng), {3});
    const auto cfg = cfg_with(Integrator::liouvillian_exponential);
    const auto two_step = evolve(m, evolve(m, rho, cfg, 0.3), cfg, 0.45);
    const auto one_step = evolve(m, rho, cfg, 0.75);
    CHECK(max_abs(two_step.op() - one_step.op()) <= 1e-10);
  }
}

TEST_CASE("positivity is monitored, not repaired") {
  // Far too coarse a step for a strongly dissipative model: RK4 overshoots.
  LindbladModel m{nm::pauli_z(), 1.0, {10.0 * nm::pauli_x()}};
  const auto zero = DensityState::from_ket(nm::ket0());
  try {
    (void)evolve(m, zero, cfg_with(Integrator::runge_kutta_4, 1.0, 1), 1.0);
    FAIL("expected a numerical-instability error");
  } catch (const NumericalInstabilityError& e) {
    CHECK(e.eigenvalue() < -1e-8);
    CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
  }
}

TEST_CASE("step-size warning") {
  CHECK_FALSE(step_size_warning(zx(), cfg_with(Integrator::runge_kutta_4, 1e-3, 10)).has_value());
  CHECK(step_size_warning(zx(), cfg_with(Integrator::runge_kutta_4, 0.5, 1)).has_value());
}

TEST_CASE("model embedding acts on the middle factor") {
  Rng rng = stream_rng(151, 0);
  LindbladModel m{random_hermitian(2, rng), 0.8, {random_ginibre(2, rng)}};
  const ComplexOperator a = random_density(3, rng), p = random_density(2, rng), b = random_density(2, rng);
  const ComplexOperator joint = tensor_product(tensor_product(a, p), b);
  const auto big = m.embedded(3, 2);
  const ComplexOperator expected = tensor_product(tensor_product(a, lindblad_rhs(m, p)), b);
  CHECK(max_abs(lindblad_rhs(big, joint) - expected) <= 1e-12);
}
