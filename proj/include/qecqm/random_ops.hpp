#pragma once

#include "qecqm/operator_algebra.hpp"

#include <cstdint>
#include <random>

namespace qecqm {

using Rng = std::mt19937_64;

/// Independent stream for sample `index` of a run seeded with `seed`.
/// Streams do not depend on evaluation order, so parallel sweeps reproduce
/// serial ones bit for bit.
Rng stream_rng(std::uint64_t seed, std::uint64_t index);

ComplexOperator random_ginibre(std::size_t dim, Rng& rng);
ComplexOperator random_unitary(std::size_t dim, Rng& rng);
ComplexOperator random_hermitian(std::size_t dim, Rng& rng);
/// Ginibre matrix with its trace removed.
ComplexOperator random_traceless(std::size_t dim, Rng& rng);
StateVector random_ket(std::size_t dim, Rng& rng);
/// Full-rank mixed state drawn from the Hilbert-Schmidt measure.
ComplexOperator random_density(std::size_t dim, Rng& rng);

}  // namespace qecqm
