#include "qecqm/separability.hpp"

#include "qecqm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qecqm {

namespace {

struct ResolvedCut {
  std::vector<std::size_t> a, b;
  std::size_t dim_a = 1, dim_b = 1;
};

ResolvedCut resolve(const DensityState& s, const Bipartition& cut) {
  const std::size_t n = s.num_subsystems();
  std::vector<bool> in_a(n, false);
  for (auto k : cut.side_a) {
    if (k >= n) throw DomainError("bipartition: subsystem " + std::to_string(k) + " out of range");
    if (in_a[k]) throw DomainError("bipartition: subsystem " + std::to_string(k) + " listed twice");
    in_a[k] = true;
  }
  ResolvedCut r;
  for (std::size_t k = 0; k < n; ++k) {
    (in_a[k] ? r.a : r.b).push_back(k);
    (in_a[k] ? r.dim_a : r.dim_b) *= s.subsystem_dims()[k];
  }
  if (r.a.empty() || r.b.empty()) throw DomainError("bipartition: both parties must be nonempty");
  return r;
}

}  // namespace

Bipartition Bipartition::first_vs_rest() { return Bipartition{{0}}; }

std::string Bipartition::describe(std::size_t num_subsystems) const {
  std::vector<bool> in_a(num_subsystems, false);
  for (auto k : side_a)
    if (k < num_subsystems) in_a[k] = true;
  std::string left, right;
  for (std::size_t k = 0; k < num_subsystems; ++k) {
    std::string& side = in_a[k] ? left : right;
    if (!side.empty()) side += ",";
    side += std::to_string(k);
  }
  return "{" + left + "}|{" + right + "}";
}

SeparabilityVerdict ppt_check(const DensityState& s, const Bipartition& cut) {
  const ResolvedCut r = resolve(s, cut);
  ComplexOperator pt = s.op();
  for (auto k : r.b) pt = partial_transpose(pt, s.subsystem_dims(), k);
  const Eigen::VectorXd ev = hermitian_eigenvalues(pt);
  SeparabilityVerdict v;
  v.min_pt_eigenvalue = ev.minCoeff();
  v.ppt = v.min_pt_eigenvalue >= -kPptTol;
  v.cut = cut.describe(s.num_subsystems());
  const std::size_t lo = std::min(r.dim_a, r.dim_b), hi = std::max(r.dim_a, r.dim_b);
  v.conclusive = lo == 2 && (hi == 2 || hi == 3);
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < 0.0) v.negativity -= ev(i);
  return v;
}

std::vector<SeparabilityVerdict> ppt_all_cuts(const DensityState& s) {
  const std::size_t n = s.num_subsystems();
  if (n < 2) throw DomainError("ppt_all_cuts: need at least two subsystems");
  if (n > 20) throw DomainError("ppt_all_cuts: too many subsystems");
  std::vector<SeparabilityVerdict> out;
  // Subsystem 0 always on side A; the mask selects the rest of A.
  const std::size_t masks = std::size_t{1} << (n - 1);
  for (std::size_t mask = 0; mask + 1 < masks; ++mask) {
    Bipartition cut{{0}};
    for (std::size_t k = 1; k < n; ++k)
      if (mask & (std::size_t{1} << (k - 1))) cut.side_a.push_back(k);
    out.push_back(ppt_check(s, cut));
  }
  return out;
}

DensityState vidal_tarrach_state(double theta, double s) {
  if (!(s >= 0.0)) throw DomainError("vidal_tarrach_state: s must be nonnegative");
  StateVector psi = StateVector::Zero(4);
  psi(0) = std::cos(theta);
  psi(3) = std::sin(theta);
  const ComplexOperator rho = projector(psi) / (1.0 + s) + (s / (4.0 * (1.0 + s))) * named::identity(4);
  return DensityState(rho, SubsystemDims{2, 2});
}

double vidal_tarrach_threshold(double theta) { return 2.0 * std::sin(2.0 * theta); }

ThresholdScan threshold_sharpness_scan(double theta, const std::vector<double>& s_grid) {
  ThresholdScan scan;
  scan.s_grid = s_grid;
  bool seen_npt = false;
  for (double s : s_grid) {
    auto v = ppt_check(vidal_tarrach_state(theta, s), Bipartition::first_vs_rest());
    if (!v.ppt) seen_npt = true;
    else if (seen_npt && !scan.transition_s) scan.transition_s = s;
    scan.verdicts.push_back(std::move(v));
  }
  return scan;
}

CorrelationVerdict product_check(const DensityState& s, const Bipartition& cut) {
  const ResolvedCut r = resolve(s, cut);
  const auto& dims = s.subsystem_dims();
  const ComplexOperator rho_a = partial_trace(s.op(), dims, r.a);
  const ComplexOperator rho_b = partial_trace(s.op(), dims, r.b);
  std::vector<std::size_t> order = r.a;
  order.insert(order.end(), r.b.begin(), r.b.end());
  const ComplexOperator regrouped = permute_subsystems(s.op(), dims, order);
  CorrelationVerdict v;
  v.product_distance = trace_distance(regrouped, tensor_product(rho_a, rho_b));
  v.is_product = v.product_distance <= kProductTol;
  return v;
}

}  // namespace qecqm
