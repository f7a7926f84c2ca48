#pragma once

#include "qecqm/operator_algebra.hpp"

#include <utility>
#include <vector>

namespace qecqm {

inline constexpr double kQfiCutoff = 1e-12;

struct QFIResult {
  double i_value = 0.0;  // QFI per unit time squared
  double fisher = 0.0;   // t^2 * i_value
  std::size_t skipped_pairs = 0;
};

/// I = 2 sum_{ij} (l_i - l_j)^2 / (l_i + l_j) |<i|G|j>|^2 in the eigenbasis of rho,
/// pairs with l_i + l_j <= cutoff skipped. fisher = t^2 I.
QFIResult qfi(const ComplexOperator& rho, const ComplexOperator& g, double t, double cutoff = kQfiCutoff);
QFIResult qfi(const DensityState& rho, const ComplexOperator& g, double t, double cutoff = kQfiCutoff);

/// 1 / sqrt(nu F). Throws DomainError for F <= 0 or nu == 0.
double cramer_rao(double fisher, std::size_t nu);

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log F at t = 1
  double r_squared = 0.0;
  std::vector<double> t_grid;
};

/// Least-squares slope of log F against log t. Needs at least four points with
/// t > 0 and F > 0.
ScalingFit scaling_exponent(const std::vector<std::pair<double, double>>& points);

}  // namespace qecqm
