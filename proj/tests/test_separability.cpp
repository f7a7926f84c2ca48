#include "doctest.h"
#include "oracles.hpp"

#include "qecqm/errors.hpp"
#include "qecqm/random_ops.hpp"
#include "qecqm/separability.hpp"

#include <cmath>

using namespace qecqm;
namespace nm = qecqm::named;

namespace {

StateVector bell() {
  StateVector v = StateVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

double oracle_min_pt(const ComplexOperator& rho, const std::vector<std::size_t>& dims, std::size_t sub) {
  return hermitian_eigenvalues(oracle::partial_transpose(rho, dims, sub)).minCoeff();
}

}  // namespace

TEST_CASE("ppt examples") {
  const auto v = ppt_check(DensityState(projector(bell()), {2, 2}), Bipartition::first_vs_rest());
  CHECK(v.min_pt_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_FALSE(v.ppt);
  CHECK(v.conclusive);
  CHECK(v.negativity == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v.cut == "{0}|{1}");

  const auto product = DensityState(tensor_product(projector(nm::ket_plus()), projector(nm::ket0())), {2, 2});
  CHECK(ppt_check(product, Bipartition::first_vs_rest()).ppt);

  const auto vt = ppt_check(vidal_tarrach_state(M_PI / 4, 2.0), Bipartition::first_vs_rest());
  CHECK(vt.ppt);
  CHECK(vt.min_pt_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(vidal_tarrach_threshold(M_PI / 4) == doctest::Approx(2.0));
  CHECK(vidal_tarrach_threshold(M_PI / 8) == doctest::Approx(std::sqrt(2.0)));
  CHECK(vidal_tarrach_threshold(0.0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(vidal_tarrach_state(0.1, -0.5), DomainError);
}

TEST_CASE("threshold sharpness at pi/4") {
  const auto scan = threshold_sharpness_scan(M_PI / 4, {1.8, 1.9, 1.95, 2.0, 2.5});
  REQUIRE(scan.verdicts.size() == 5);
  for (int i = 0; i < 3; ++i) CHECK_FALSE(scan.verdicts[i].ppt);
  for (int i = 3; i < 5; ++i) CHECK(scan.verdicts[i].ppt);
  REQUIRE(scan.transition_s.has_value());
  CHECK(*scan.transition_s == 2.0);
  CHECK_FALSE(threshold_sharpness_scan(M_PI / 4, {2.0, 3.0}).transition_s.has_value());
}

TEST_CASE("Vidal-Tarrach grid follows the closed-form threshold") {
  for (int i = 1; i < 50; ++i) {
    const double theta = (M_PI / 2) * i / 50.0;
    for (int j = 0; j < 50; ++j) {
      const double s = 4.0 * j / 49.0;
      const auto v = ppt_check(vidal_tarrach_state(theta, s), Bipartition::first_vs_rest());
      const double closed = (s / 4.0 - std::sin(2 * theta) / 2.0) / (1.0 + s);
      CHECK(v.min_pt_eigenvalue == doctest::Approx(closed).epsilon(1e-12));
      if (std::abs(s - vidal_tarrach_threshold(theta)) > 1e-6)
        CHECK(v.ppt == (s >= vidal_tarrach_threshold(theta)));
    }
  }
}

TEST_CASE("pure states: PT minimum is minus the Schmidt product") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng = stream_rng(8100, i);
    const StateVector psi = random_ket(4, rng);
    const ComplexOperator rho = projector(psi);
    const ComplexOperator a = oracle::partial_trace(rho, {2, 2}, {true, false});
    const double det = std::abs(a.determinant());
    const auto v = ppt_check(DensityState(rho, {2, 2}), Bipartition::first_vs_rest());
    CHECK(v.min_pt_eigenvalue == doctest::Approx(-std::sqrt(det)).epsilon(1e-9));
    CHECK_FALSE(v.ppt);
  }
}

TEST_CASE("ppt is invariant under local unitaries") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = stream_rng(8200, i);
    const ComplexOperator rho = random_density(6, rng);
    const ComplexOperator u = tensor_product(random_unitary(2, rng), random_unitary(3, rng));
    const double a = ppt_check(DensityState(rho, {2, 3}), Bipartition::first_vs_rest()).min_pt_eigenvalue;
    const double b = ppt_check(DensityState(conjugate_by(u, rho), {2, 3}), Bipartition::first_vs_rest()).min_pt_eigenvalue;
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
    CHECK(a == doctest::Approx(oracle_min_pt(rho, {2, 3}, 1)).epsilon(1e-10));
  }
}

TEST_CASE("multipartite cuts") {
  StateVector ghz = StateVector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  const auto cuts = ppt_all_cuts(DensityState(projector(ghz), {2, 2, 2}));
  REQUIRE(cuts.size() == 3);
  for (const auto& v : cuts) {
    CHECK_FALSE(v.ppt);
    CHECK_FALSE(v.conclusive);
    CHECK(v.min_pt_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
  }
  // Bell pair on (0, 2) with qubit 1 in |0>: the cut {0,2}|{1} is PPT.
  const SubsystemDims dims{2, 2, 2};
  const std::vector<std::size_t> order{0, 2, 1};
  const ComplexOperator bell_02 = permute_subsystems(tensor_product(projector(bell()), projector(nm::ket0())), dims, order);
  const DensityState s(bell_02, {2, 2, 2});
  CHECK(ppt_check(s, Bipartition{{0, 2}}).ppt);
  CHECK_FALSE(ppt_check(s, Bipartition{{0, 1}}).ppt);
  CHECK(Bipartition{{0, 2}}.describe(3) == "{0,2}|{1}");
  CHECK_THROWS_AS(ppt_check(s, Bipartition{{}}), DomainError);
  CHECK_THROWS_AS(ppt_check(s, Bipartition{{0, 1, 2}}), DomainError);
}

TEST_CASE("product check") {
  const auto phi = product_check(DensityState(projector(bell()), {2, 2}), Bipartition::first_vs_rest());
  CHECK(phi.product_distance == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_FALSE(phi.is_product);

  Rng rng = stream_rng(8300, 0);
  const ComplexOperator a = random_density(2, rng), b = random_density(3, rng);
  const auto prod = product_check(DensityState(tensor_product(a, b), {2, 3}), Bipartition::first_vs_rest());
  CHECK(prod.product_distance <= 1e-12);
  CHECK(prod.is_product);

  const auto pp = product_check(DensityState(projector(tensor_product(nm::ket_plus(), nm::ket_plus())), {2, 2}),
                                Bipartition::first_vs_rest());
  CHECK(pp.is_product);
}
