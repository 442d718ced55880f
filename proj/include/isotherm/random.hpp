// Random test ensembles: Haar unitaries, Hilbert-Schmidt states, GUE Hamiltonians.

#pragma once

#include "isotherm/operators.hpp"

#include <cstdint>
#include <random>

namespace isotherm {

using Rng = std::mt19937_64;

// Independent stream for (seed, stream); trial-indexed so that sweeps are
// reproducible regardless of evaluation order.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

// rows x cols matrix with i.i.d. standard complex normal entries.
Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);
// QR of a Ginibre matrix with the phases of diag(R) removed.
Matrix haar_unitary(std::size_t dim, Rng& rng);
Eigen::VectorXcd random_pure_vector(std::size_t dim, Rng& rng);

// Hilbert-Schmidt measure (rank = dim) or induced measure of rank k.
DensityMatrix random_state(std::size_t dim, Rng& rng);
DensityMatrix random_state(std::size_t dim, std::size_t rank, Rng& rng);
// Diagonal state with a flat-Dirichlet spectrum.
DensityMatrix random_diagonal_state(std::size_t dim, Rng& rng);

// GUE sample scaled so that the spectral width is O(scale).
HermitianOperator random_hamiltonian(std::size_t dim, Rng& rng, double scale = 1.0);
// Diagonal Hamiltonian with i.i.d. uniform levels on [0, scale].
HermitianOperator random_diagonal_hamiltonian(std::size_t dim, Rng& rng, double scale = 1.0);

}  // namespace isotherm
