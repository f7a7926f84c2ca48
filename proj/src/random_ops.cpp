#include "qecqm/random_ops.hpp"

#include <Eigen/QR>

namespace qecqm {

Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return Rng(z);
}

ComplexOperator random_ginibre(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexOperator m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

ComplexOperator random_unitary(std::size_t dim, Rng& rng) {
  const ComplexOperator g = random_ginibre(dim, rng);
  Eigen::HouseholderQR<ComplexOperator> qr(g);
  ComplexOperator q = qr.householderQ();
  const ComplexOperator r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Haar measure: absorb the phases of diag(R) into Q.
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

ComplexOperator random_hermitian(std::size_t dim, Rng& rng) {
  const ComplexOperator g = random_ginibre(dim, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexOperator random_traceless(std::size_t dim, Rng& rng) {
  ComplexOperator g = random_ginibre(dim, rng);
  const Complex shift = g.trace() / static_cast<double>(dim);
  g -= shift * named::identity(dim);
  return g;
}

StateVector random_ket(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v.normalized();
}

ComplexOperator random_density(std::size_t dim, Rng& rng) {
  const ComplexOperator g = random_ginibre(dim, rng);
  ComplexOperator rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace qecqm
