#pragma once

#include "qecqm/operator_algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qecqm {

inline constexpr double kPptTol = 1e-10;
inline constexpr double kProductTol = 1e-9;

/// Subsystems listed in side_a form the first party, the rest the second.
struct Bipartition {
  std::vector<std::size_t> side_a;

  /// Splits after the first factor: {0} | {1, ..., n-1}.
  static Bipartition first_vs_rest();
  std::string describe(std::size_t num_subsystems) const;
};

struct SeparabilityVerdict {
  double min_pt_eigenvalue = 0.0;
  bool ppt = false;  // min_pt_eigenvalue >= -kPptTol
  std::string cut;
  bool conclusive = false;  // 2x2 and 2x3 cuts, where PPT is equivalent to separability
  double negativity = 0.0;  // |sum of negative PT eigenvalues|
};

struct CorrelationVerdict {
  double product_distance = 0.0;
  bool is_product = false;
};

/// Partial transpose on the second party of the cut.
SeparabilityVerdict ppt_check(const DensityState& s, const Bipartition& cut);

/// ppt_check over every bipartition with subsystem 0 on side A.
std::vector<SeparabilityVerdict> ppt_all_cuts(const DensityState& s);

/// (1/(1+s)) |psi><psi| + s/(4(1+s)) I on two qubits, psi = cos(theta)|00> + sin(theta)|11>.
DensityState vidal_tarrach_state(double theta, double s);
double vidal_tarrach_threshold(double theta);

struct ThresholdScan {
  std::vector<double> s_grid;
  std::vector<SeparabilityVerdict> verdicts;
  /// First grid point that is PPT after an NPT point, if any.
  std::optional<double> transition_s;
};

ThresholdScan threshold_sharpness_scan(double theta, const std::vector<double>& s_grid);

CorrelationVerdict product_check(const DensityState& s, const Bipartition& cut);

}  // namespace qecqm
