#include "qecqm/metrology.hpp"

#include "qecqm/errors.hpp"

#include <cmath>

namespace qecqm {

QFIResult qfi(const ComplexOperator& rho, const ComplexOperator& g, double t, double cutoff) {
  if (rho.rows() != rho.cols() || g.rows() != rho.rows() || g.cols() != rho.cols())
    throw DomainError("qfi: state and generator dimensions differ");
  if (!is_hermitian(g, 1e-10)) throw DomainError("qfi: generator is not Hermitian");
  const auto eig = hermitian_eig(rho);
  const ComplexOperator gb = eig.eigenvectors.adjoint() * g * eig.eigenvectors;
  const Eigen::Index n = rho.rows();
  QFIResult r;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double li = std::max(eig.eigenvalues(i), 0.0);
      const double lj = std::max(eig.eigenvalues(j), 0.0);
      const double den = li + lj;
      if (den <= cutoff) {
        ++r.skipped_pairs;
        continue;
      }
      const double diff = li - lj;
      sum += diff * diff / den * std::norm(gb(i, j));
    }
  }
  r.i_value = 2.0 * sum;
  r.fisher = t * t * r.i_value;
  return r;
}

QFIResult qfi(const DensityState& rho, const ComplexOperator& g, double t, double cutoff) {
  return qfi(rho.op(), g, t, cutoff);
}

double cramer_rao(double fisher, std::size_t nu) {
  if (!(fisher > 0.0)) throw DomainError("cramer_rao: Fisher information must be positive");
  if (nu == 0) throw DomainError("cramer_rao: need at least one repetition");
  return 1.0 / std::sqrt(static_cast<double>(nu) * fisher);
}

ScalingFit scaling_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw DomainError("scaling_exponent: need at least four points");
  ScalingFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [t, f] : points) {
    if (!(t > 0.0) || !(f > 0.0)) throw DomainError("scaling_exponent: t and F must be positive");
    const double x = std::log(t), y = std::log(f);
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    fit.t_grid.push_back(t);
  }
  const double n = static_cast<double>(points.size());
  const double vx = sxx - sx * sx / n;
  if (vx <= 0.0) throw DomainError("scaling_exponent: t grid has no spread");
  const double cxy = sxy - sx * sy / n;
  const double vy = syy - sy * sy / n;
  fit.exponent = cxy / vx;
  fit.intercept = (sy - fit.exponent * sx) / n;
  fit.r_squared = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return fit;
}

}  // namespace qecqm
