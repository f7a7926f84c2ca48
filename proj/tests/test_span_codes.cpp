#include "doctest.h"
#include "oracles.hpp"

#include "qecqm/errors.hpp"
#include "qecqm/lindblad.hpp"
#include "qecqm/random_ops.hpp"
#include "qecqm/span_codes.hpp"

#include <cmath>

using namespace qecqm;
namespace nm = qecqm::named;

namespace {

double max_abs(const ComplexOperator& m) { return m.cwiseAbs().maxCoeff(); }

LindbladSpan span_of(std::vector<ComplexOperator> jumps, std::size_t d = 2) { return build_span(jumps, d); }

ComplexOperator pauli(const Eigen::Vector3d& a) {
  return a(0) * nm::pauli_x() + a(1) * nm::pauli_y() + a(2) * nm::pauli_z();
}

void check_span_invariants(const LindbladSpan& s) {
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j)
      CHECK(std::abs(hs_inner(s.ortho_basis[i], s.ortho_basis[j]) - (i == j ? 1.0 : 0.0)) <= 1e-10);
  for (const auto& r : s.raw_generators) {
    ComplexOperator rec = ComplexOperator::Zero(r.rows(), r.cols());
    for (const auto& b : s.ortho_basis) rec += hs_inner(b, r) * b;
    CHECK((rec - r).norm() <= 1e-10);
  }
}

void check_decomposition(const ComplexOperator& g, const LindbladSpan& s, const GeneratorDecomposition& d) {
  CHECK(max_abs(d.g_parallel + d.g_perp - g) <= 1e-10);
  for (const auto& b : s.ortho_basis) CHECK(std::abs(hs_inner(b, d.g_perp)) <= 1e-10);
  if (d.perp_rank == 2) {
    REQUIRE(d.lambda.has_value());
    CHECK(*d.lambda > 0.0);
    CHECK((d.g_perp - *d.lambda * (projector(*d.c0) - projector(*d.c1))).norm() <= 1e-9);
    CHECK(std::abs(d.c0->dot(*d.c1)) <= 1e-10);
  }
}

}  // namespace

TEST_CASE("span examples") {
  const auto sx = span_of({nm::pauli_x()});
  CHECK(sx.dim() == 2);
  CHECK(max_abs(sx.ortho_basis[0] - nm::identity(2) / std::sqrt(2.0)) <= 1e-15);
  CHECK(std::abs(std::abs(hs_inner(sx.ortho_basis[1], nm::pauli_x())) - std::sqrt(2.0)) <= 1e-14);
  check_span_invariants(sx);

  const auto empty = span_of({}, 3);
  CHECK(empty.dim() == 1);
  CHECK(max_abs(empty.ortho_basis[0] - nm::identity(3) / std::sqrt(3.0)) <= 1e-15);

  const auto full = span_of({nm::pauli_x(), nm::pauli_y(), nm::pauli_z()});
  CHECK(full.dim() == 4);
  check_span_invariants(full);
  // Raw generators: I, 3 L, 3 L^dag, 9 products.
  CHECK(full.raw_generators.size() == 16);

  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = stream_rng(201, i);
    check_span_invariants(span_of({random_ginibre(3, rng), random_ginibre(3, rng)}, 3));
  }
}

TEST_CASE("generator decomposition examples") {
  const auto sx = span_of({nm::pauli_x()});
  const auto dz = decompose_generator(nm::pauli_z(), sx);
  CHECK(max_abs(dz.g_parallel) <= 1e-15);
  CHECK(max_abs(dz.g_perp - nm::pauli_z()) <= 1e-15);
  CHECK(dz.perp_rank == 2);
  CHECK(*dz.lambda == doctest::Approx(1.0));
  CHECK(std::abs(std::abs(dz.c0->dot(nm::ket0())) - 1.0) <= 1e-12);
  CHECK(std::abs(std::abs(dz.c1->dot(nm::ket1())) - 1.0) <= 1e-12);
  check_decomposition(nm::pauli_z(), sx, dz);

  const auto dx = decompose_generator(nm::pauli_x(), sx);
  CHECK(max_abs(dx.g_perp) <= 1e-15);
  CHECK(dx.perp_rank == 0);
  CHECK_FALSE(dx.lambda.has_value());

  const ComplexOperator xz = nm::pauli_x() + nm::pauli_z();
  const auto dxz = decompose_generator(xz, sx);
  // Projection coefficients: Tr(X G)/2 = 1 along X, Tr(G)/2 = 0 along I.
  const ComplexOperator par =
      (hs_inner(nm::pauli_x(), xz) / 2.0) * nm::pauli_x() + (hs_inner(nm::identity(2), xz) / 2.0) * nm::identity(2);
  CHECK(max_abs(dxz.g_parallel - par) <= 1e-14);
  CHECK(max_abs(dxz.g_perp - nm::pauli_z()) <= 1e-14);

  ComplexOperator nonherm = nm::pauli_x();
  nonherm(0, 1) = 3.0;
  CHECK_THROWS_AS(decompose_generator(nonherm, sx), DomainError);
}

TEST_CASE("HS achievability") {
  const auto sx = span_of({nm::pauli_x()});
  CHECK(hs_achievable(nm::pauli_z(), sx));
  CHECK_FALSE(hs_achievable(nm::pauli_x(), sx));
  const auto full = span_of({nm::pauli_x(), nm::pauli_y(), nm::pauli_z()});
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = stream_rng(211, i);
    CHECK_FALSE(hs_achievable(random_hermitian(2, rng), full));
  }
}

TEST_CASE("zero-diagonal pairs") {
  {
    const auto [c0, c1] = zero_diagonal_pair(nm::pauli_x());
    CHECK(std::abs(std::abs(c0.dot(nm::ket0())) - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(c1.dot(nm::ket1())) - 1.0) <= 1e-12);
  }
  {
    const auto [c0, c1] = zero_diagonal_pair(nm::pauli_z());
    CHECK(std::abs(std::abs(c0.dot(nm::ket_plus())) - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(c1.dot(nm::ket_minus())) - 1.0) <= 1e-12);
  }
  CHECK(max_abs(construct_generator_from_noise(nm::pauli_x()) - nm::pauli_z()) <= 1e-12);
  CHECK(max_abs(construct_generator_from_noise(nm::pauli_z()) - nm::pauli_x()) <= 1e-12);
  CHECK_THROWS_AS(zero_diagonal_pair(nm::identity(2)), DomainError);
  CHECK_THROWS_AS(zero_diagonal_pair(projector(nm::ket0())), DomainError);
}

TEST_CASE("zero-diagonal construction over random traceless noise") {
  for (std::size_t d : {2u, 3u, 4u, 6u, 8u}) {
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng = stream_rng(300 + d, i);
      const ComplexOperator l = random_traceless(d, rng);
      const auto [c0, c1] = zero_diagonal_pair(l, i);
      CHECK(std::abs(c0.dot(l * c0)) <= 1e-9);
      CHECK(std::abs(c1.dot(l * c1)) <= 1e-9);
      CHECK(std::abs(c0.dot(c1)) <= 1e-10);
      const ComplexOperator g = projector(c0) - projector(c1);
      CHECK(std::abs(g.trace()) <= 1e-9);
      CHECK(numerical_rank(g) == 2);
      CHECK(std::abs((g * l).trace()) <= 1e-9);
    }
  }
}

TEST_CASE("fallback descent reaches a zero diagonal element") {
  Rng rng = stream_rng(401, 0);
  const ComplexOperator l = random_traceless(4, rng);
  const StateVector v = detail::minimize_diagonal_element(l, 9);
  CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
  CHECK(std::abs(v.dot(l * v)) <= 1e-9);
}

TEST_CASE("qubit structure: perpendicular part is always rank 2") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = stream_rng(411, i);
    std::normal_distribution<double> n;
    const Eigen::Vector3d a(n(rng), n(rng), n(rng));
    Eigen::Vector3d b(n(rng), n(rng), n(rng));
    b -= 0.2 * b.dot(a) / a.squaredNorm() * a;  // keep b off the span of a
    const Complex scale(n(rng), n(rng));
    const LindbladSpan s = span_of({scale * pauli(a)});
    const ComplexOperator g = pauli(b);
    if (!hs_achievable(g, s)) continue;
    const auto dec = decompose_generator(g, s);
    CHECK(dec.perp_rank == 2);
    check_decomposition(g, s, dec);
    CHECK_NOTHROW(sector_codespaces(dec));
  }
}

TEST_CASE("sector codespaces") {
  const auto dec = decompose_generator(nm::pauli_z(), span_of({nm::pauli_x()}));
  const auto codes = sector_codespaces(dec);
  const ComplexOperator expected = tensor_product(projector(nm::ket0()), projector(nm::ket_plus())) +
                                   tensor_product(projector(nm::ket1()), projector(nm::ket_minus()));
  CHECK(max_abs(codes.plus.projector - expected) <= 1e-14);
  CHECK(std::abs(codes.combined.projector.trace() - 4.0) <= 1e-14);
  CHECK(max_abs(codes.plus.projector * codes.minus.projector) <= 1e-12);
  for (const Codespace* cs : {&codes.plus, &codes.minus, &codes.combined})
    CHECK(max_abs(cs->projector * cs->projector - cs->projector) <= 1e-10);

  const auto in_span = decompose_generator(nm::pauli_x(), span_of({nm::pauli_x()}));
  CHECK_THROWS_AS(sector_codespaces(in_span), PreconditionError);
}

TEST_CASE("Knill-Laflamme checks") {
  const auto codes = sector_codespaces(decompose_generator(nm::pauli_z(), span_of({nm::pauli_x()})));
  const auto plus = check_kl_conditions(codes.plus, {nm::pauli_x()});
  CHECK(plus.passed);
  REQUIRE(plus.records.size() == 2);
  CHECK(std::abs(plus.records[0].mu) <= 1e-15);
  CHECK(plus.records[0].residual <= 1e-12);

  // Matrix elements straight from the basis vectors.
  const StateVector v0 = tensor_product(nm::ket0(), nm::ket_plus());
  const StateVector v1 = tensor_product(nm::ket1(), nm::ket_minus());
  const ComplexOperator xi = tensor_product(nm::pauli_x(), nm::identity(2));
  CHECK(std::abs(v0.dot(xi * v0)) == 0.0);
  CHECK(std::abs(v1.dot(xi * v1)) == 0.0);
  CHECK(std::abs(v1.dot(xi * v0)) <= 1e-16);

  const auto id = check_kl_conditions(codes.plus, {nm::identity(2)});
  CHECK(id.passed);
  CHECK(std::abs(id.records[0].mu - 1.0) <= 1e-14);
  CHECK(id.records[0].residual <= 1e-14);

  const Codespace full = make_codespace({nm::basis(4, 0), nm::basis(4, 1), nm::basis(4, 2), nm::basis(4, 3)},
                                        CodespaceLabel::combined, 2);
  const auto f = check_kl_conditions(full, {nm::pauli_x()});
  CHECK_FALSE(f.passed);
  CHECK(f.records[0].residual > 0.0);

  for (const auto& r : plus.records) CHECK((r.residual <= plus.tolerance) == plus.passed);
}

TEST_CASE("effective generator") {
  const auto codes = sector_codespaces(decompose_generator(nm::pauli_z(), span_of({nm::pauli_x()})));
  const auto eff = effective_generator(codes.plus, nm::pauli_z());
  ComplexOperator d = ComplexOperator::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  CHECK(max_abs(eff.matrix - d) <= 1e-14);
  CHECK(eff.gap == doctest::Approx(2.0));

  const auto trivial = effective_generator(codes.plus, nm::identity(2));
  CHECK(max_abs(trivial.matrix - nm::identity(2)) <= 1e-14);
  CHECK(trivial.gap <= 1e-14);

  const auto comb = effective_generator(codes.combined, nm::pauli_z());
  CHECK(max_abs(comb.matrix - comb.matrix.diagonal().asDiagonal().toDenseMatrix()) <= 1e-14);
  std::vector<double> diag;
  for (Eigen::Index i = 0; i < 4; ++i) diag.push_back(comb.matrix(i, i).real());
  std::sort(diag.begin(), diag.end());
  const double expected[] = {-1.0, -1.0, 1.0, 1.0};
  for (int i = 0; i < 4; ++i) CHECK(diag[static_cast<std::size_t>(i)] == doctest::Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("KL recovery") {
  const auto codes = sector_codespaces(decompose_generator(nm::pauli_z(), span_of({nm::pauli_x()})));
  const ComplexOperator xi = lift_to_probe(nm::pauli_x());
  const KrausSet r = kl_recovery(codes.plus, {nm::identity(4), xi});

  ComplexOperator completeness = ComplexOperator::Zero(4, 4);
  for (const auto& k : r) completeness += k.adjoint() * k;
  CHECK(max_abs(completeness - nm::identity(4)) <= 1e-12);

  const StateVector c = tensor_product(nm::ket0(), nm::ket_plus());
  const ComplexOperator out = apply_kraus(r, projector(xi * c));
  CHECK(c.dot(out * c).real() >= 1.0 - 1e-10);

  // Any code vector and any error in the span of {I, X (x) I}.
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = stream_rng(501, i);
    const StateVector a = random_ket(2, rng);
    const StateVector code = a(0) * codes.plus.basis[0] + a(1) * codes.plus.basis[1];
    const Complex u(std::cos(0.3 * i), 0.2), w(0.5, std::sin(0.7 * i));
    const StateVector damaged = u * code + w * (xi * code);
    const ComplexOperator rec = apply_kraus(r, projector(damaged));
    CHECK(code.dot(rec * code).real() / rec.trace().real() >= 1.0 - 1e-10);
  }

  const KrausSet trivial = kl_recovery(codes.plus, {nm::identity(4)});
  const ComplexOperator code_state = projector(codes.plus.basis[0]);
  CHECK(max_abs(apply_kraus(trivial, code_state) - code_state) <= 1e-12);

  const Codespace full = make_codespace({nm::basis(4, 0), nm::basis(4, 1), nm::basis(4, 2), nm::basis(4, 3)},
                                        CodespaceLabel::combined, 2);
  CHECK_THROWS_AS(kl_recovery(full, {nm::identity(4), xi}), PreconditionError);
}

TEST_CASE("sector-wise recovery on the combined code") {
  const auto codes = sector_codespaces(decompose_generator(nm::pauli_z(), span_of({nm::pauli_x()})));
  const ComplexOperator xi = lift_to_probe(nm::pauli_x());
  const KrausSet r = sector_recovery(codes, {nm::identity(4), xi});
  ComplexOperator completeness = ComplexOperator::Zero(4, 4);
  for (const auto& k : r) completeness += k.adjoint() * k;
  CHECK(max_abs(completeness - nm::identity(4)) <= 1e-12);

  // X (x) I swaps the sectors, so the sector-diagonal Kraus operators cannot
  // undo it; the channel leaves every combined-code state unchanged.
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng = stream_rng(511, i);
    const ComplexOperator rho = random_density(4, rng);
    CHECK(max_abs(apply_kraus(r, rho) - rho) <= 1e-12);
  }
}

TEST_CASE("noiseless logical evolution from |+>|+> is second order in dt") {
  const LindbladModel model{nm::pauli_z(), 1.0, {nm::pauli_x()}};
  const auto codes = sector_codespaces(decompose_generator(model.generator, span_of(model.jumps)));
  const KrausSet r = sector_recovery(codes, {nm::identity(4), lift_to_probe(nm::pauli_x())});
  const ComplexOperator start = projector(tensor_product(nm::ket_plus(), nm::ket_plus()));
  const EvolutionConfig cfg{1e-2, 10, Integrator::liouvillian_exponential};

  auto residual = [&](double dt) {
    const Propagator prop(model.embedded(1, 2), cfg, dt);
    const ComplexOperator out = apply_kraus(r, prop.apply(start));
    const ComplexOperator ideal = oracle::diagonal_unitary_evolution(start, Eigen::Vector4d(1, 1, -1, -1), dt);
    return oracle::trace_distance(out, ideal);
  };
  const double r1 = residual(0.02), r2 = residual(0.01), r3 = residual(0.005);
  CHECK(r1 <= 1.0 * 0.02 * 0.02);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(r2 / r3 == doctest::Approx(4.0).epsilon(0.1));
}
