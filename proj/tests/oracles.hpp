#pragma once

// Reference computations used only by tests. Each follows a different route
// from the library code it checks.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

// Element formula (a (x) b)[i*nb + k, j*nb + l] = a[i,j] b[k,l].
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Multi-index decomposition with subsystem 0 most significant.
inline std::vector<std::size_t> digits(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

inline std::size_t compose(const std::vector<std::size_t>& d, const std::vector<std::size_t>& dims) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + d[k];
  return index;
}

// Sums every full matrix element whose traced digits agree.
inline Mat partial_trace(const Mat& rho, const std::vector<std::size_t>& dims, const std::vector<bool>& keep) {
  std::vector<std::size_t> kept_dims;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (keep[k]) kept_dims.push_back(dims[k]);
  std::size_t dk = 1;
  for (auto d : kept_dims) dk *= d;
  Mat out = Mat::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (Eigen::Index r = 0; r < rho.rows(); ++r)
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      const auto dr = digits(static_cast<std::size_t>(r), dims), dc = digits(static_cast<std::size_t>(c), dims);
      bool same = true;
      std::vector<std::size_t> kr, kc;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (keep[k]) {
          kr.push_back(dr[k]);
          kc.push_back(dc[k]);
        } else if (dr[k] != dc[k]) {
          same = false;
        }
      }
      if (same)
        out(static_cast<Eigen::Index>(compose(kr, kept_dims)), static_cast<Eigen::Index>(compose(kc, kept_dims))) +=
            rho(r, c);
    }
  return out;
}

// Swaps the row and column digit of one subsystem.
inline Mat partial_transpose(const Mat& rho, const std::vector<std::size_t>& dims, std::size_t sub) {
  Mat out(rho.rows(), rho.cols());
  for (Eigen::Index r = 0; r < rho.rows(); ++r)
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      auto dr = digits(static_cast<std::size_t>(r), dims), dc = digits(static_cast<std::size_t>(c), dims);
      std::swap(dr[sub], dc[sub]);
      out(static_cast<Eigen::Index>(compose(dr, dims)), static_cast<Eigen::Index>(compose(dc, dims))) = rho(r, c);
    }
  return out;
}

// Sum of singular values / 2.
inline double trace_distance(const Mat& a, const Mat& b) {
  Eigen::JacobiSVD<Mat> svd(a - b);
  return 0.5 * svd.singularValues().sum();
}

// SLD route: solve (1/2)(rho L + L rho) = d rho with d rho = -i[G, rho] by
// vectorization, then I = Tr(rho L^2). Least squares handles the kernel of
// rank-deficient rho.
inline double sld_qfi(const Mat& rho, const Mat& g) {
  const Eigen::Index n = rho.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat drho = cd(0, -1) * (g * rho - rho * g);
  // vec(rho L) = (I (x) rho) vec L, vec(L rho) = (rho^T (x) I) vec L
  const Mat a = 0.5 * (kron(id, rho) + kron(rho.transpose(), id));
  const Vec b = Eigen::Map<const Vec>(drho.data(), n * n);
  const Vec x = a.completeOrthogonalDecomposition().solve(b);
  const Mat l = Eigen::Map<const Mat>(x.data(), n, n);
  return (rho * l * l).trace().real();
}

// 4 (<G^2> - <G>^2)
inline double pure_qfi(const Vec& psi, const Mat& g) {
  const Vec v = psi / psi.norm();
  const cd m1 = v.dot(g * v);
  const cd m2 = v.dot(g * g * v);
  return 4.0 * (m2.real() - std::norm(m1));
}

// Dissipator written out term by term.
inline Mat lindblad_rhs(const Mat& h, const std::vector<Mat>& jumps, const Mat& rho) {
  Mat out = cd(0, -1) * (h * rho - rho * h);
  for (const auto& l : jumps) {
    const Mat ld = l.adjoint();
    out += l * rho * ld - 0.5 * (ld * l * rho) - 0.5 * (rho * ld * l);
  }
  return out;
}

// Steady state from the kernel of the Liouvillian, built with the oracle kron.
inline Mat steady_state(const Mat& h, const std::vector<Mat>& jumps) {
  const Eigen::Index n = h.rows();
  const Mat id = Mat::Identity(n, n);
  Mat liou = cd(0, -1) * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& l : jumps) {
    const Mat ldl = l.adjoint() * l;
    liou += kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
  }
  Eigen::JacobiSVD<Mat> svd(liou, Eigen::ComputeFullV);
  const Vec v = svd.matrixV().col(n * n - 1);
  Mat rho = Eigen::Map<const Mat>(v.data(), n, n);
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

// exp(-i theta t G) rho exp(+i theta t G) for diagonal G.
inline Mat diagonal_unitary_evolution(const Mat& rho, const Eigen::VectorXd& g_diag, double theta_t) {
  Mat out = rho;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j)
      out(i, j) *= std::exp(cd(0, -theta_t * (g_diag(i) - g_diag(j))));
  return out;
}

}  // namespace oracle
