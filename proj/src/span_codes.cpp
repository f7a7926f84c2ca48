#include "qecqm/span_codes.hpp"

#include "qecqm/errors.hpp"
#include "qecqm/random_ops.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <numbers>

namespace qecqm {

namespace {

constexpr double kSpanDropTol = 1e-10;

double frobenius(const ComplexOperator& a) { return a.norm(); }

ComplexOperator hadamard() {
  ComplexOperator h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

// Unit v in span{x, y} with <v|m|v> = target, where target lies on the segment
// between <x|m|x> and <y|m|y>. The phase between x and y is chosen so the
// cross term is parallel to the segment; the remaining one-parameter family
// then sweeps the whole segment as the mixing angle runs over [0, pi/2].
StateVector segment_solve(const ComplexOperator& m, const StateVector& x, const StateVector& y,
                          Complex target) {
  const Complex alpha = x.dot(m * x);
  const Complex beta = y.dot(m * y);
  const Complex delta = beta - alpha;
  if (std::abs(delta) < 1e-300) return x;
  const double r = std::clamp(std::real(std::conj(delta) * (target - alpha)) / std::norm(delta), 0.0, 1.0);

  const Complex mp = x.dot(m * y) / delta;
  const Complex np = y.dot(m * x) / delta;
  const double a = mp.imag() + np.imag();
  const double b = mp.real() - np.real();
  const double phi = (a == 0.0 && b == 0.0) ? 0.0 : std::atan2(-a, b);
  const Complex phase = std::polar(1.0, phi);
  const double omega = std::real(phase * mp + std::conj(phase) * np);

  // g(u) = (1 - cos u)/2 + omega sin(u)/2, g(0) = 0, g(pi) = 1
  const auto g = [omega](double u) { return 0.5 * (1.0 - std::cos(u)) + 0.5 * omega * std::sin(u); };
  double lo = 0.0, hi = std::numbers::pi;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < r ? lo : hi) = mid;
  }
  const double t = 0.25 * (lo + hi);
  StateVector v = std::cos(t) * x + phase * std::sin(t) * y;
  return v.normalized();
}

// Unit v with <v|m|v> ~ 0 for an operator whose diagonal averages to zero.
StateVector zero_diagonal_vector(const ComplexOperator& m, std::uint64_t seed) {
  const Eigen::Index n = m.rows();
  if (n == 1) return StateVector::Ones(1);
  const double scale = std::max(1.0, m.norm());
  const double accept = 1e-12 * scale;

  const auto verify = [&](const StateVector& v) { return std::abs(v.dot(m * v)) <= accept; };
  const auto e = [n](Eigen::Index i) { return named::basis(static_cast<std::size_t>(n), static_cast<std::size_t>(i)); };

  Eigen::VectorXcd d = m.diagonal();
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(d(i)) <= accept) return e(i);

  // Zero on a segment between two diagonal entries.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex p = std::conj(d(i)) * d(j);
      if (p.real() < 0.0 && std::abs(p.imag()) <= 1e-12 * std::abs(p)) {
        StateVector v = segment_solve(m, e(i), e(j), 0.0);
        if (verify(v)) return v;
      }
    }

  // Zero inside a triangle: pick the most interior one.
  double best = -1.0;
  Eigen::Index bi = -1, bj = -1, bk = -1;
  double bary_a = 0, bary_b = 0, bary_c = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      for (Eigen::Index k = j + 1; k < n; ++k) {
        // Solve a d_i + b d_j + c d_k = 0, a + b + c = 1.
        const Complex u = d(i) - d(k), w = d(j) - d(k);
        const double det = u.real() * w.imag() - u.imag() * w.real();
        if (std::abs(det) <= 1e-14 * scale * scale) continue;
        const double a = (-d(k).real() * w.imag() + d(k).imag() * w.real()) / det;
        const double b = (-u.real() * d(k).imag() + u.imag() * d(k).real()) / det;
        const double c = 1.0 - a - b;
        const double interior = std::min({a, b, c});
        if (interior > best) {
          best = interior;
          bi = i, bj = j, bk = k;
          bary_a = a, bary_b = b, bary_c = c;
        }
      }
  if (best >= 0.0) {
    const Complex p = (bary_a * d(bi) + bary_b * d(bj)) / (bary_a + bary_b);
    const StateVector u = segment_solve(m, e(bi), e(bj), p);
    (void)bary_c;
    StateVector v = segment_solve(m, u, e(bk), 0.0);
    if (verify(v)) return v;
  }

  StateVector v = detail::minimize_diagonal_element(m, seed);
  if (std::abs(v.dot(m * v)) > 1e-9) throw ConvergenceError("zero_diagonal_pair: search did not reach zero");
  return v;
}

// Orthonormal basis of the complement of unit vector v (columns).
ComplexOperator complement_basis(const StateVector& v) {
  const ComplexOperator column = v;
  Eigen::HouseholderQR<ComplexOperator> qr(column);
  const ComplexOperator q = qr.householderQ();
  return q.rightCols(q.cols() - 1);
}

}  // namespace

// ---------------------------------------------------------------------------

LindbladSpan build_span(const std::vector<ComplexOperator>& jumps, std::size_t operator_dim) {
  LindbladSpan span;
  span.operator_dim = operator_dim;
  span.raw_generators.push_back(named::identity(operator_dim));
  for (const auto& l : jumps) {
    if (static_cast<std::size_t>(l.rows()) != operator_dim || l.rows() != l.cols())
      throw DomainError("build_span: jump operator has the wrong dimension");
    span.raw_generators.push_back(l);
  }
  for (const auto& l : jumps) span.raw_generators.push_back(l.adjoint());
  for (const auto& lk : jumps)
    for (const auto& lj : jumps) span.raw_generators.push_back(lk.adjoint() * lj);

  for (const auto& raw : span.raw_generators) {
    const double n0 = frobenius(raw);
    if (n0 <= kSpanDropTol) continue;
    ComplexOperator v = raw / n0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : span.ortho_basis) v -= hs_inner(b, v) * b;
    const double n = frobenius(v);
    if (n > kSpanDropTol) span.ortho_basis.push_back(v / n);
  }
  return span;
}

GeneratorDecomposition decompose_generator(const ComplexOperator& g, const LindbladSpan& span) {
  if (static_cast<std::size_t>(g.rows()) != span.operator_dim || g.rows() != g.cols())
    throw DomainError("decompose_generator: generator dimension does not match span");
  if (hermiticity_defect(g) > 1e-10) throw DomainError("decompose_generator: generator is not Hermitian");

  GeneratorDecomposition dec;
  dec.g_parallel = ComplexOperator::Zero(g.rows(), g.cols());
  for (const auto& b : span.ortho_basis) dec.g_parallel += hs_inner(b, g) * b;
  dec.g_parallel = 0.5 * (dec.g_parallel + dec.g_parallel.adjoint()).eval();
  dec.g_perp = g - dec.g_parallel;
  dec.perp_norm = frobenius(dec.g_perp);

  if (dec.perp_norm <= 1e-10 * std::max(1.0, frobenius(g))) {
    dec.perp_rank = 0;
    return dec;
  }
  dec.perp_rank = numerical_rank(dec.g_perp);
  if (dec.perp_rank == 2) {
    const auto eig = hermitian_eig(dec.g_perp);
    const Eigen::Index top = eig.eigenvalues.size() - 1;
    dec.lambda = 0.5 * (eig.eigenvalues(top) - eig.eigenvalues(0));
    dec.c0 = eig.eigenvectors.col(top);
    dec.c1 = eig.eigenvectors.col(0);
  }
  return dec;
}

bool hs_achievable(const ComplexOperator& g, const LindbladSpan& span, double tol) {
  return decompose_generator(g, span).perp_norm > tol;
}

// ---------------------------------------------------------------------------
// Zero-diagonal construction

namespace detail {

StateVector minimize_diagonal_element(const ComplexOperator& m, std::uint64_t seed, int restarts) {
  const auto n = static_cast<std::size_t>(m.rows());
  const ComplexOperator md = m.adjoint();
  StateVector best;
  double best_val = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(r));
    StateVector v = random_ket(n, rng);
    double step = 0.5 / std::max(1.0, m.norm());
    for (int it = 0; it < 4000; ++it) {
      const Complex q = v.dot(m * v);
      const double f = std::norm(q);
      if (f < 1e-30) break;
      StateVector grad = std::conj(q) * (m * v) + q * (md * v);
      grad -= v.dot(grad) * v;  // tangent to the unit sphere
      bool moved = false;
      while (step > 1e-18) {
        const StateVector trial = (v - step * grad).normalized();
        if (std::norm(trial.dot(m * trial)) < f) {
          v = trial;
          step *= 1.5;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    const double val = std::abs(v.dot(m * v));
    if (val < best_val) {
      best_val = val;
      best = v;
    }
  }
  return best;
}

}  // namespace detail

std::pair<StateVector, StateVector> zero_diagonal_pair(const ComplexOperator& l, std::uint64_t seed) {
  if (l.rows() != l.cols() || l.rows() < 2) throw DomainError("zero_diagonal_pair: need a square operator of dim >= 2");
  if (std::abs(l.trace()) > 1e-10 * std::max(1.0, l.norm()))
    throw DomainError("zero_diagonal_pair: operator is not traceless");

  const auto n = static_cast<std::size_t>(l.rows());
  const ComplexOperator centred = l - (l.trace() / static_cast<double>(n)) * named::identity(n);
  StateVector c0 = zero_diagonal_vector(centred, seed);

  const ComplexOperator q = complement_basis(c0);
  ComplexOperator reduced = q.adjoint() * centred * q;
  const auto m = static_cast<std::size_t>(reduced.rows());
  reduced -= (reduced.trace() / static_cast<double>(m)) * named::identity(m);
  StateVector c1 = q * zero_diagonal_vector(reduced, seed + 1);
  c1.normalize();

  if (std::abs(c0.dot(l * c0)) > 1e-9 || std::abs(c1.dot(l * c1)) > 1e-9)
    throw ConvergenceError("zero_diagonal_pair: diagonal elements not within 1e-9 of zero");
  return {c0, c1};
}

ComplexOperator construct_generator_from_noise(const ComplexOperator& l, std::uint64_t seed) {
  const auto [c0, c1] = zero_diagonal_pair(l, seed);
  return projector(c0) - projector(c1);
}

// ---------------------------------------------------------------------------
// Codespaces

std::string to_string(CodespaceLabel label) {
  switch (label) {
    case CodespaceLabel::plus_sector: return "plus_sector";
    case CodespaceLabel::minus_sector: return "minus_sector";
    case CodespaceLabel::combined: return "combined";
  }
  return "unknown";
}

Codespace make_codespace(std::vector<StateVector> basis, CodespaceLabel label, std::size_t probe_dim) {
  if (basis.empty()) throw DomainError("make_codespace: empty basis");
  Codespace cs;
  cs.projector = ComplexOperator::Zero(basis.front().size(), basis.front().size());
  for (const auto& b : basis) cs.projector += projector(b);
  cs.basis = std::move(basis);
  cs.label = label;
  cs.probe_dim = probe_dim;
  return cs;
}

ComplexOperator lift_to_probe(const ComplexOperator& op) { return tensor_product(op, named::identity(2)); }

SectorCodespaces sector_codespaces(const GeneratorDecomposition& dec) {
  if (dec.perp_rank != 2 || !dec.c0 || !dec.c1)
    throw PreconditionError("sector_codespaces: perpendicular generator component must have rank 2");
  const auto d = static_cast<std::size_t>(dec.c0->size());
  const StateVector& c0 = *dec.c0;
  const StateVector& c1 = *dec.c1;
  const StateVector plus = named::ket_plus(), minus = named::ket_minus();
  SectorCodespaces out{
      make_codespace({tensor_product(c0, plus), tensor_product(c1, minus)}, CodespaceLabel::plus_sector, d),
      make_codespace({tensor_product(c0, minus), tensor_product(c1, plus)}, CodespaceLabel::minus_sector, d),
      make_codespace({tensor_product(c0, plus), tensor_product(c1, minus), tensor_product(c0, minus),
                      tensor_product(c1, plus)},
                     CodespaceLabel::combined, d)};
  return out;
}

ComplexOperator sector_encoder(const GeneratorDecomposition& dec) {
  if (dec.perp_rank != 2 || !dec.c0 || !dec.c1)
    throw PreconditionError("sector_encoder: perpendicular generator component must have rank 2");
  const auto d = static_cast<std::size_t>(dec.c0->size());
  const ComplexOperator p0 = projector(*dec.c0), p1 = projector(*dec.c1);
  const ComplexOperator h = hadamard();
  return tensor_product(p0, h) + tensor_product(p1, ComplexOperator(h * named::pauli_x())) +
         tensor_product(ComplexOperator(named::identity(d) - p0 - p1), named::identity(2));
}

KLReport check_kl_conditions(const Codespace& cs, const std::vector<ComplexOperator>& jumps, double tol) {
  KLReport report;
  report.tolerance = tol;
  const double code_dim = cs.projector.trace().real();
  const auto check = [&](std::string tag, const ComplexOperator& op) {
    if (static_cast<std::size_t>(op.rows()) != cs.probe_dim)
      throw DomainError("check_kl_conditions: operator does not act on the probe");
    const ComplexOperator sandwich = cs.projector * lift_to_probe(op) * cs.projector;
    const Complex mu = sandwich.trace() / code_dim;
    const double residual = (sandwich - mu * cs.projector).norm();
    report.records.push_back({std::move(tag), mu, residual});
    if (!(residual <= tol)) report.passed = false;
  };
  for (std::size_t k = 0; k < jumps.size(); ++k) check("L" + std::to_string(k), jumps[k]);
  for (std::size_t k = 0; k < jumps.size(); ++k)
    for (std::size_t j = 0; j < jumps.size(); ++j)
      check("L" + std::to_string(k) + "^dag L" + std::to_string(j), jumps[k].adjoint() * jumps[j]);
  return report;
}

EffectiveGenerator effective_generator(const Codespace& cs, const ComplexOperator& g) {
  if (static_cast<std::size_t>(g.rows()) != cs.probe_dim)
    throw DomainError("effective_generator: generator does not act on the probe");
  const ComplexOperator lifted = lift_to_probe(g);
  const auto k = static_cast<Eigen::Index>(cs.size());
  EffectiveGenerator out;
  out.matrix.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      out.matrix(i, j) = cs.basis[static_cast<std::size_t>(i)].dot(lifted * cs.basis[static_cast<std::size_t>(j)]);
  const Eigen::VectorXd ev = hermitian_eigenvalues(out.matrix);
  out.gap = ev.maxCoeff() - ev.minCoeff();
  return out;
}

namespace {

// Recovery elements without the completion term.
KrausSet syndrome_recoveries(const Codespace& cs, const std::vector<ComplexOperator>& errors, double tol) {
  const auto na = static_cast<Eigen::Index>(errors.size());
  const Eigen::Index dim = cs.projector.rows();
  const double code_dim = cs.projector.trace().real();
  for (const auto& e : errors)
    if (e.rows() != dim || e.cols() != dim) throw DomainError("kl_recovery: error operator has the wrong dimension");

  ComplexOperator kl(na, na);
  for (Eigen::Index a = 0; a < na; ++a)
    for (Eigen::Index b = 0; b < na; ++b) {
      const ComplexOperator s = cs.projector * errors[static_cast<std::size_t>(a)].adjoint() *
                                errors[static_cast<std::size_t>(b)] * cs.projector;
      const Complex m = s.trace() / code_dim;
      if ((s - m * cs.projector).norm() > tol)
        throw PreconditionError("kl_recovery: Knill-Laflamme condition fails for error pair (" +
                                std::to_string(a) + ", " + std::to_string(b) + ")");
      kl(a, b) = m;
    }
  const auto eig = hermitian_eig(0.5 * (kl + kl.adjoint()));
  const double top = std::max(eig.eigenvalues.maxCoeff(), 0.0);

  KrausSet out;
  for (Eigen::Index k = 0; k < na; ++k) {
    const double dk = eig.eigenvalues(k);
    if (dk <= 1e-12 * std::max(1.0, top)) continue;
    ComplexOperator f = ComplexOperator::Zero(dim, dim);
    for (Eigen::Index a = 0; a < na; ++a) f += eig.eigenvectors(a, k) * errors[static_cast<std::size_t>(a)];
    out.push_back(cs.projector * f.adjoint() / std::sqrt(dk));
  }
  return out;
}

// sqrt(I - sum K^dag K), dropped when negligible.
void complete_channel(KrausSet& kraus, Eigen::Index dim) {
  ComplexOperator s = ComplexOperator::Zero(dim, dim);
  for (const auto& k : kraus) s += k.adjoint() * k;
  const ComplexOperator rest = named::identity(static_cast<std::size_t>(dim)) - 0.5 * (s + s.adjoint());
  const auto eig = hermitian_eig(0.5 * (rest + rest.adjoint()));
  if (eig.eigenvalues.minCoeff() < -1e-9) throw PreconditionError("recovery: Kraus elements exceed the identity");
  const Eigen::VectorXd root = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const ComplexOperator completion = eig.eigenvectors * root.asDiagonal() * eig.eigenvectors.adjoint();
  if (completion.norm() > 1e-12) kraus.push_back(completion);
}

}  // namespace

KrausSet kl_recovery(const Codespace& cs, const std::vector<ComplexOperator>& errors, double tol) {
  KrausSet out = syndrome_recoveries(cs, errors, tol);
  // Syndrome subspaces are mutually orthogonal, so sum R^dag R is a projector.
  complete_channel(out, cs.projector.rows());
  return out;
}

KrausSet sector_recovery(const SectorCodespaces& codes, const std::vector<ComplexOperator>& errors, double tol) {
  const KrausSet base = syndrome_recoveries(codes.plus, errors, tol);
  const ComplexOperator flip = tensor_product(named::identity(codes.plus.probe_dim), named::pauli_z());
  const ComplexOperator& p = codes.plus.projector;
  const ComplexOperator& pm = codes.minus.projector;
  KrausSet out;
  for (const auto& k : base) {
    const ComplexOperator k_minus = flip * k * flip;
    out.push_back(p * k * p + pm * k_minus * pm);
  }
  complete_channel(out, p.rows());
  return out;
}

}  // namespace qecqm
