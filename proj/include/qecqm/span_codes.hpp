#pragma once

#include "qecqm/operator_algebra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qecqm {

/// span{I, L_k, L_k^dag, L_k^dag L_j} with a Hilbert-Schmidt orthonormal basis.
struct LindbladSpan {
  std::vector<ComplexOperator> raw_generators;
  std::vector<ComplexOperator> ortho_basis;
  std::size_t operator_dim = 0;  // dimension of the operators themselves

  std::size_t dim() const noexcept { return ortho_basis.size(); }
};

/// Raw generators are enumerated I, each L_k, each L_k^dag, then L_k^dag L_j
/// with k the outer loop. Modified Gram-Schmidt drops residuals below 1e-10.
LindbladSpan build_span(const std::vector<ComplexOperator>& jumps, std::size_t operator_dim);

struct GeneratorDecomposition {
  ComplexOperator g_parallel;
  ComplexOperator g_perp;
  double perp_norm = 0.0;
  std::size_t perp_rank = 0;
  // Present only when perp_rank == 2; g_perp = lambda (|c0><c0| - |c1><c1|).
  std::optional<double> lambda;
  std::optional<StateVector> c0;
  std::optional<StateVector> c1;
};

GeneratorDecomposition decompose_generator(const ComplexOperator& g, const LindbladSpan& span);

inline constexpr double kAchievabilityTol = 1e-9;

/// True when the generator has a component outside the Lindblad span.
bool hs_achievable(const ComplexOperator& g, const LindbladSpan& span, double tol = kAchievabilityTol);

inline constexpr std::uint64_t kDefaultSearchSeed = 0x5eed;

/// Orthonormal c0, c1 with <c0|l|c0> = <c1|l|c1> = 0 for traceless l.
///
/// The diagonal of l in the computational basis averages to zero, so zero lies
/// in the convex hull of two or three diagonal entries. Each entry is a point of
/// the numerical range, and on the 2-plane of two vectors the numerical range
/// contains the segment between their expectation values, which reduces the
/// search to a one-dimensional root find. c1 repeats the search on the
/// orthogonal complement of c0, where the compressed operator is again
/// traceless. A randomized descent on |<v|l|v>|^2 (seeded) covers numerically
/// degenerate cases.
std::pair<StateVector, StateVector> zero_diagonal_pair(const ComplexOperator& l,
                                                       std::uint64_t seed = kDefaultSearchSeed);

/// G = |c0><c0| - |c1><c1| from zero_diagonal_pair(l): traceless, rank 2, Tr(G l) = 0.
ComplexOperator construct_generator_from_noise(const ComplexOperator& l,
                                               std::uint64_t seed = kDefaultSearchSeed);

namespace detail {
// Unit v with |<v|m|v>| minimal, by projected gradient descent from `restarts` random starts.
StateVector minimize_diagonal_element(const ComplexOperator& m, std::uint64_t seed, int restarts = 24);
}  // namespace detail

enum class CodespaceLabel { plus_sector, minus_sector, combined };
std::string to_string(CodespaceLabel label);

/// Protected subspace of probe (x) one ancilla qubit.
struct Codespace {
  std::vector<StateVector> basis;
  ComplexOperator projector;
  CodespaceLabel label = CodespaceLabel::plus_sector;
  std::size_t probe_dim = 0;

  std::size_t size() const noexcept { return basis.size(); }
};

Codespace make_codespace(std::vector<StateVector> basis, CodespaceLabel label, std::size_t probe_dim);

struct SectorCodespaces {
  Codespace plus;      // {c0 +, c1 -}
  Codespace minus;     // {c0 -, c1 +}
  Codespace combined;  // union of both
};

/// Requires dec.perp_rank == 2; throws PreconditionError otherwise.
SectorCodespaces sector_codespaces(const GeneratorDecomposition& dec);

/// Probe (x) |0> -> code: |c0>|0> -> |c0>|+>, |c1>|0> -> |c1>|->, identity ancilla
/// rotation elsewhere on the probe.
ComplexOperator sector_encoder(const GeneratorDecomposition& dec);

inline constexpr double kKLTol = 1e-9;

struct KLRecord {
  std::string tag;
  Complex mu;
  double residual = 0.0;  // Frobenius norm of Pi O Pi - mu Pi
};

struct KLReport {
  std::vector<KLRecord> records;
  bool passed = true;
  double tolerance = kKLTol;
};

/// Checks Pi (O (x) I) Pi = mu Pi for O in {L_k} and {L_k^dag L_j}. Operators act on the probe.
KLReport check_kl_conditions(const Codespace& cs, const std::vector<ComplexOperator>& jumps,
                             double tol = kKLTol);

struct EffectiveGenerator {
  ComplexOperator matrix;  // Pi (g (x) I) Pi in the codespace basis
  double gap = 0.0;        // largest minus smallest eigenvalue
};

EffectiveGenerator effective_generator(const Codespace& cs, const ComplexOperator& g);

using KrausSet = std::vector<ComplexOperator>;

/// Recovery for errors acting on the full probe (x) ancilla space. Errors are
/// orthogonalized through the eigenbasis of the KL matrix; each syndrome
/// subspace maps back onto the code, and (I - support projector) completes
/// the channel. Throws PreconditionError if the KL check fails on the error set.
KrausSet kl_recovery(const Codespace& cs, const std::vector<ComplexOperator>& errors, double tol = kKLTol);

/// Sector-wise recovery on the combined code:
/// K_i = Pi K_i Pi + Pi' K'_i Pi' with K'_i = (I (x) Z) K_i (I (x) Z) and K_i the
/// plus-sector recovery, completed to a trace-preserving channel.
KrausSet sector_recovery(const SectorCodespaces& codes, const std::vector<ComplexOperator>& errors,
                         double tol = kKLTol);

/// Lifts a probe operator to probe (x) qubit ancilla.
ComplexOperator lift_to_probe(const ComplexOperator& op);

}  // namespace qecqm
