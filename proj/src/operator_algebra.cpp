#include "qecqm/operator_algebra.hpp"

#include "qecqm/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qecqm {

namespace {

// Row-major digit strides: subsystem 0 varies slowest.
std::vector<std::size_t> strides_of(const SubsystemDims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

void check_square(const ComplexOperator& op, const char* what) {
  if (op.rows() != op.cols() || op.rows() == 0)
    throw DomainError(std::string(what) + ": operator must be square and nonempty");
}

void check_layout(const ComplexOperator& op, const SubsystemDims& dims, const char* what) {
  check_square(op, what);
  if (dims.empty()) throw DomainError(std::string(what) + ": empty subsystem list");
  for (auto d : dims)
    if (d == 0) throw DomainError(std::string(what) + ": zero subsystem dimension");
  if (product_of(dims) != static_cast<std::size_t>(op.rows()))
    throw DomainError(std::string(what) + ": subsystem dimensions do not multiply to operator dimension");
}

// Fix the global phase so the first component of (near-)maximal modulus is
// real and positive.
void canonicalize_phase(Eigen::Ref<StateVector> v) {
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak * (1.0 - 1e-9)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

}  // namespace

std::size_t product_of(const SubsystemDims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// ---------------------------------------------------------------------------
// DensityState

DensityState::DensityState(ComplexOperator op, SubsystemDims subsystem_dims)
    : DensityState(std::move(op), std::move(subsystem_dims), StateTolerances{}) {}

DensityState::DensityState(ComplexOperator op, SubsystemDims subsystem_dims, const StateTolerances& tol)
    : op_(std::move(op)), dims_(std::move(subsystem_dims)), tol_(tol) {
  check_layout(op_, dims_, "DensityState");
  const double herm = hermiticity_defect(op_);
  if (herm > tol.hermitian)
    throw DomainError("DensityState: not Hermitian (defect " + std::to_string(herm) + ")");
  const double tr = op_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace)
    throw DomainError("DensityState: trace " + std::to_string(tr) + " differs from 1");
  const double lmin = min_eigenvalue(op_);
  if (lmin < tol.positivity)
    throw DomainError("DensityState: negative eigenvalue " + std::to_string(lmin));
}

DensityState::DensityState(ComplexOperator op)
    : DensityState(op, SubsystemDims{static_cast<std::size_t>(op.rows())}) {}

DensityState DensityState::from_ket(const StateVector& ket, SubsystemDims subsystem_dims) {
  const double n = ket.norm();
  if (n == 0.0) throw DomainError("DensityState::from_ket: zero vector");
  return DensityState(projector(ket / n), std::move(subsystem_dims));
}

DensityState DensityState::from_ket(const StateVector& ket) {
  return from_ket(ket, SubsystemDims{static_cast<std::size_t>(ket.size())});
}

DensityState DensityState::maximally_mixed(SubsystemDims subsystem_dims) {
  const auto d = product_of(subsystem_dims);
  return DensityState(named::identity(d) / static_cast<double>(d), std::move(subsystem_dims));
}

// ---------------------------------------------------------------------------
// Named operators

namespace named {

ComplexOperator identity(std::size_t dim) {
  return ComplexOperator::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

ComplexOperator pauli_x() {
  ComplexOperator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexOperator pauli_y() {
  ComplexOperator m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexOperator pauli_z() {
  ComplexOperator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

StateVector basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DomainError("basis: index out of range");
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

StateVector ket0() { return basis(2, 0); }
StateVector ket1() { return basis(2, 1); }
StateVector ket_plus() { return (ket0() + ket1()) / std::sqrt(2.0); }
StateVector ket_minus() { return (ket0() - ket1()) / std::sqrt(2.0); }

StateVector ket_theta(double theta) {
  StateVector v(2);
  v << std::cos(theta), std::sin(theta);
  return v;
}

}  // namespace named

// ---------------------------------------------------------------------------
// Tensor structure

ComplexOperator tensor_product(const ComplexOperator& a, const ComplexOperator& b) {
  ComplexOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexOperator tensor_product(std::span<const ComplexOperator> factors) {
  if (factors.empty()) return named::identity(1);
  ComplexOperator out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = tensor_product(out, factors[k]);
  return out;
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  StateVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexOperator projector(const StateVector& v) { return v * v.adjoint(); }

ComplexOperator partial_trace(const ComplexOperator& op, const SubsystemDims& dims,
                              std::span<const std::size_t> keep) {
  check_layout(op, dims, "partial_trace");
  if (keep.empty()) throw DomainError("partial_trace: keep set is empty");
  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) {
    if (k >= dims.size()) throw DomainError("partial_trace: subsystem index " + std::to_string(k) + " out of range");
    if (kept[k]) throw DomainError("partial_trace: duplicate subsystem index");
    kept[k] = true;
  }

  const auto strides = strides_of(dims);
  SubsystemDims kept_dims;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (kept[k]) kept_dims.push_back(dims[k]);
  const auto kept_strides = strides_of(kept_dims);
  const auto n = static_cast<std::size_t>(op.rows());

  // Reduced index of every full index plus a key for the traced digits.
  std::vector<std::size_t> reduced(n), traced_key(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t r = 0, t = 0, kk = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const std::size_t digit = (idx / strides[k]) % dims[k];
      if (kept[k]) {
        r += digit * kept_strides[kk++];
      } else {
        t += digit * strides[k];
      }
    }
    reduced[idx] = r;
    traced_key[idx] = t;
  }

  const auto m = static_cast<Eigen::Index>(product_of(kept_dims));
  ComplexOperator out = ComplexOperator::Zero(m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (traced_key[i] == traced_key[j])
        out(static_cast<Eigen::Index>(reduced[i]), static_cast<Eigen::Index>(reduced[j])) +=
            op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

DensityState partial_trace(const DensityState& s, std::span<const std::size_t> keep) {
  ComplexOperator reduced = partial_trace(s.op(), s.subsystem_dims(), keep);
  std::vector<std::size_t> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  SubsystemDims kept_dims;
  for (auto k : sorted) kept_dims.push_back(s.subsystem_dims()[k]);
  reduced = 0.5 * (reduced + reduced.adjoint()).eval();
  return DensityState(std::move(reduced), std::move(kept_dims), s.tolerances());
}

DensityState partial_trace(const DensityState& s, std::initializer_list<std::size_t> keep) {
  return partial_trace(s, std::span<const std::size_t>(keep.begin(), keep.size()));
}

ComplexOperator partial_transpose(const ComplexOperator& op, const SubsystemDims& dims,
                                  std::size_t subsystem) {
  check_layout(op, dims, "partial_transpose");
  if (subsystem >= dims.size())
    throw DomainError("partial_transpose: subsystem index " + std::to_string(subsystem) + " out of range");
  const auto strides = strides_of(dims);
  const std::size_t stride = strides[subsystem];
  const std::size_t d = dims[subsystem];
  const auto n = static_cast<std::size_t>(op.rows());
  ComplexOperator out(op.rows(), op.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t di = (i / stride) % d;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t dj = (j / stride) % d;
      const std::size_t i2 = i - di * stride + dj * stride;
      const std::size_t j2 = j - dj * stride + di * stride;
      out(static_cast<Eigen::Index>(i2), static_cast<Eigen::Index>(j2)) =
          op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

ComplexOperator partial_transpose(const DensityState& s, std::size_t subsystem) {
  return partial_transpose(s.op(), s.subsystem_dims(), subsystem);
}

ComplexOperator permute_subsystems(const ComplexOperator& op, const SubsystemDims& dims,
                                   std::span<const std::size_t> order) {
  check_layout(op, dims, "permute_subsystems");
  if (order.size() != dims.size()) throw DomainError("permute_subsystems: order has wrong length");
  std::vector<bool> seen(dims.size(), false);
  for (auto k : order) {
    if (k >= dims.size() || seen[k]) throw DomainError("permute_subsystems: order is not a permutation");
    seen[k] = true;
  }
  SubsystemDims new_dims(dims.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_dims[k] = dims[order[k]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);
  const auto n = static_cast<std::size_t>(op.rows());

  std::vector<std::size_t> map(n);  // new index -> old index
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t old = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t digit = (idx / new_strides[k]) % new_dims[k];
      old += digit * old_strides[order[k]];
    }
    map[idx] = old;
  }
  ComplexOperator out(op.rows(), op.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          op(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j]));
  return out;
}

// ---------------------------------------------------------------------------
// Inner products and spectra

Complex hs_inner(const ComplexOperator& a, const ComplexOperator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DomainError("hs_inner: dimension mismatch");
  return (a.conjugate().cwiseProduct(b)).sum();
}

double hermiticity_defect(const ComplexOperator& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexOperator& a, double tol) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

bool is_unitary(const ComplexOperator& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return ((u.adjoint() * u) - named::identity(static_cast<std::size_t>(u.rows()))).cwiseAbs().maxCoeff() <= tol;
}

HermitianEigensystem hermitian_eig(const ComplexOperator& a) {
  check_square(a, "hermitian_eig");
  if (hermiticity_defect(a) > 1e-10) throw DomainError("hermitian_eig: input is not Hermitian");
  const ComplexOperator sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexOperator> solver(sym);
  if (solver.info() != Eigen::Success) throw ConvergenceError("hermitian_eig: eigensolver failed");

  HermitianEigensystem out{solver.eigenvalues(), solver.eigenvectors()};

  // Re-orthonormalize each degenerate cluster in index order.
  const double scale = std::max(1.0, out.eigenvalues.cwiseAbs().maxCoeff());
  const Eigen::Index n = out.eigenvalues.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && out.eigenvalues(end) - out.eigenvalues(end - 1) <= 1e-10 * scale) ++end;
    if (end - start > 1) {
      for (Eigen::Index c = start; c < end; ++c) {
        StateVector v = out.eigenvectors.col(c);
        for (Eigen::Index p = start; p < c; ++p)
          v -= out.eigenvectors.col(p).dot(v) * out.eigenvectors.col(p);
        out.eigenvectors.col(c) = v.normalized();
      }
    }
    start = end;
  }
  for (Eigen::Index c = 0; c < n; ++c) canonicalize_phase(out.eigenvectors.col(c));
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexOperator& a) {
  check_square(a, "hermitian_eigenvalues");
  const ComplexOperator sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexOperator> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const ComplexOperator& a) { return hermitian_eigenvalues(a).minCoeff(); }

std::size_t numerical_rank(const ComplexOperator& a, double tol) {
  if (!(tol > 0.0)) throw DomainError("numerical_rank: tolerance must be positive");
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexOperator> svd(a);
  const auto& sv = svd.singularValues();
  const double largest = sv.size() ? sv(0) : 0.0;
  if (largest == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * largest) ++rank;
  return rank;
}

double trace_distance(const ComplexOperator& a, const ComplexOperator& b) {
  return 0.5 * hermitian_eigenvalues(a - b).cwiseAbs().sum();
}

double purity(const ComplexOperator& rho) { return hs_inner(rho, rho).real(); }

ComplexOperator apply_kraus(std::span<const ComplexOperator> kraus, const ComplexOperator& rho) {
  ComplexOperator out = ComplexOperator::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

ComplexOperator conjugate_by(const ComplexOperator& u, const ComplexOperator& rho) {
  return u * rho * u.adjoint();
}

}  // namespace qecqm
