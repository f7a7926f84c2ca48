#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qecqm {

using Complex = std::complex<double>;
using ComplexOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using SubsystemDims = std::vector<std::size_t>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = -1e-10;
inline constexpr double kDefaultRankTol = 1e-9;

struct StateTolerances {
  double hermitian = kHermitianTol;
  double trace = kTraceTol;
  double positivity = kPositivityTol;  // lower bound on the smallest eigenvalue
};

/// Hermitian, PSD, unit-trace operator with its tensor-factor layout.
/// Subsystem 0 is the leftmost (slowest-varying) factor.
class DensityState {
 public:
  /// Validates all invariants; throws DomainError naming the one violated.
  DensityState(ComplexOperator op, SubsystemDims subsystem_dims);
  DensityState(ComplexOperator op, SubsystemDims subsystem_dims, const StateTolerances& tol);
  /// Single-factor state.
  explicit DensityState(ComplexOperator op);

  static DensityState from_ket(const StateVector& ket, SubsystemDims subsystem_dims);
  static DensityState from_ket(const StateVector& ket);
  static DensityState maximally_mixed(SubsystemDims subsystem_dims);

  const ComplexOperator& op() const noexcept { return op_; }
  const SubsystemDims& subsystem_dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(op_.rows()); }
  std::size_t num_subsystems() const noexcept { return dims_.size(); }
  /// Tolerances the state was validated against; derived states reuse them.
  const StateTolerances& tolerances() const noexcept { return tol_; }

 private:
  ComplexOperator op_;
  SubsystemDims dims_;
  StateTolerances tol_;
};

struct HermitianEigensystem {
  Eigen::VectorXd eigenvalues;  // ascending
  ComplexOperator eigenvectors; // column i pairs with eigenvalues[i]
};

// Named single-qubit operators and kets.
namespace named {
ComplexOperator identity(std::size_t dim);
ComplexOperator pauli_x();
ComplexOperator pauli_y();
ComplexOperator pauli_z();
StateVector basis(std::size_t dim, std::size_t index);
StateVector ket0();
StateVector ket1();
StateVector ket_plus();
StateVector ket_minus();
/// cos(theta)|0> + sin(theta)|1>
StateVector ket_theta(double theta);
}  // namespace named

ComplexOperator tensor_product(const ComplexOperator& a, const ComplexOperator& b);
ComplexOperator tensor_product(std::span<const ComplexOperator> factors);
StateVector tensor_product(const StateVector& a, const StateVector& b);

ComplexOperator projector(const StateVector& v);

/// Reduced operator on the kept subsystems, in their original relative order.
ComplexOperator partial_trace(const ComplexOperator& op, const SubsystemDims& dims,
                              std::span<const std::size_t> keep);
DensityState partial_trace(const DensityState& s, std::span<const std::size_t> keep);
DensityState partial_trace(const DensityState& s, std::initializer_list<std::size_t> keep);

ComplexOperator partial_transpose(const ComplexOperator& op, const SubsystemDims& dims,
                                  std::size_t subsystem);
ComplexOperator partial_transpose(const DensityState& s, std::size_t subsystem);

/// Reorders tensor factors: new factor k is old factor order[k].
ComplexOperator permute_subsystems(const ComplexOperator& op, const SubsystemDims& dims,
                                   std::span<const std::size_t> order);

/// Tr(a^dagger b)
Complex hs_inner(const ComplexOperator& a, const ComplexOperator& b);

HermitianEigensystem hermitian_eig(const ComplexOperator& a);
Eigen::VectorXd hermitian_eigenvalues(const ComplexOperator& a);
double min_eigenvalue(const ComplexOperator& a);

/// Number of singular values above tol * (largest singular value).
std::size_t numerical_rank(const ComplexOperator& a, double tol = kDefaultRankTol);

double hermiticity_defect(const ComplexOperator& a);  // max |a - a^dagger|
bool is_hermitian(const ComplexOperator& a, double tol);
bool is_unitary(const ComplexOperator& u, double tol);

/// (1/2) || a - b ||_1 for Hermitian a, b.
double trace_distance(const ComplexOperator& a, const ComplexOperator& b);
double purity(const ComplexOperator& rho);

ComplexOperator apply_kraus(std::span<const ComplexOperator> kraus, const ComplexOperator& rho);
ComplexOperator conjugate_by(const ComplexOperator& u, const ComplexOperator& rho);

std::size_t product_of(const SubsystemDims& dims);

}  // namespace qecqm
