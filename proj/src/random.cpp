#include "isotherm/random.hpp"

#include "isotherm/error.hpp"

#include <cmath>
#include <vector>

namespace isotherm {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

Matrix haar_unitary(std::size_t dim, Rng& rng) {
    const Matrix g = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) q.col(k) *= r(k, k) / mag;
    }
    return q;
}

Eigen::VectorXcd random_pure_vector(std::size_t dim, Rng& rng) {
    Eigen::VectorXcd v = ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

DensityMatrix random_state(std::size_t dim, Rng& rng) { return random_state(dim, dim, rng); }

DensityMatrix random_state(std::size_t dim, std::size_t rank, Rng& rng) {
    if (rank == 0 || rank > dim) throw ValidationError("random_state: rank must be in [1, dim]");
    const Matrix g = ginibre(dim, rank, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

DensityMatrix random_diagonal_state(std::size_t dim, Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> p(dim);
    double total = 0.0;
    for (double& x : p) total += (x = expo(rng));
    for (double& x : p) x /= total;
    return DensityMatrix::diagonal(p);
}

HermitianOperator random_hamiltonian(std::size_t dim, Rng& rng, double scale) {
    const Matrix g = ginibre(dim, dim, rng);
    const double norm = std::sqrt(2.0 * static_cast<double>(dim));
    return HermitianOperator((scale / norm) * (g + g.adjoint()));
}

HermitianOperator random_diagonal_hamiltonian(std::size_t dim, Rng& rng, double scale) {
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<double> e(dim);
    for (double& x : e) x = u(rng);
    return HermitianOperator::diagonal(e);
}

}  // namespace isotherm
