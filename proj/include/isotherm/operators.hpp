// operators.hpp: Hermitian operators, density matrices, entropy and reduction.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace isotherm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-8;   // rejection threshold at construction
inline constexpr double kStateTolerance = 1e-10;      // trace / Hermiticity of states
inline constexpr double kEigenClip = 1e-12;           // negative eigenvalues above -kEigenClip are clipped

// A validated Hermitian matrix together with its eigendecomposition.
class HermitianOperator {
  public:
    explicit HermitianOperator(const Matrix& entries);
    static HermitianOperator diagonal(std::span<const double> values);
    static HermitianOperator identity(std::size_t dim);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& matrix() const noexcept { return entries_; }
    // Ascending eigenvalues and matching orthonormal eigenvectors (columns).
    const RealVector& eigenvalues() const noexcept { return eigenvalues_; }
    const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
    double trace() const noexcept { return entries_.trace().real(); }

    friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
    friend HermitianOperator operator*(double s, const HermitianOperator& a);

  private:
    Matrix entries_;
    RealVector eigenvalues_;
    Matrix eigenvectors_;
};

// A validated quantum state. The spectrum is clipped at zero, renormalized and
// cached in descending order.
class DensityMatrix {
  public:
    explicit DensityMatrix(const Matrix& entries);
    static DensityMatrix diagonal(std::span<const double> probabilities);
    static DensityMatrix maximally_mixed(std::size_t dim);
    static DensityMatrix pure(const Eigen::VectorXcd& psi);
    // U diag(p) U^dagger for an orthonormal basis U; p must be a probability vector.
    static DensityMatrix from_spectrum(const Matrix& basis, std::span<const double> probabilities);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& matrix() const noexcept { return entries_; }
    const std::vector<double>& spectrum() const noexcept { return spectrum_; }
    // Eigenvectors ordered to match spectrum().
    const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
    std::size_t rank(double tol = kEigenClip) const noexcept;

  private:
    Matrix entries_;
    std::vector<double> spectrum_;
    Matrix eigenvectors_;
};

// Ordered local dimensions of a composite system.
class SubsystemSplit {
  public:
    explicit SubsystemSplit(std::vector<std::size_t> dims);
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t parties() const noexcept { return dims_.size(); }
    std::size_t total_dim() const noexcept { return total_; }

  private:
    std::vector<std::size_t> dims_;
    std::size_t total_{1};
};

// von Neumann entropy in nats.
double entropy(const DensityMatrix& rho);
double shannon_entropy(std::span<const double> probabilities);

// Tr(A rho).
double expectation(const HermitianOperator& a, const DensityMatrix& rho);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
DensityMatrix tensor(std::span<const DensityMatrix> factors);
// H_A (x) 1 + 1 (x) H_B
HermitianOperator kron_sum(const HermitianOperator& a, const HermitianOperator& b);
// sum over X of 1 (x) ... (x) H_X (x) ... (x) 1
HermitianOperator kron_sum(std::span<const HermitianOperator> parts);

Matrix kron(const Matrix& a, const Matrix& b);

// Reduced state on the parties listed in `keep` (ascending, without repeats).
DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemSplit& split, std::span<const std::size_t> keep);
DensityMatrix marginal(const DensityMatrix& rho, const SubsystemSplit& split, std::size_t party);

// S(A) + S(B) - S(AB) for a bipartite split.
double mutual_information(const DensityMatrix& rho_ab, const SubsystemSplit& split);

// D(rho||sigma) in nats; throws DomainError when supp(rho) is not inside supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

// max |A_ij|
double max_abs(const Matrix& m);
// max |[A, B]_ij|
double commutator_norm(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace isotherm
