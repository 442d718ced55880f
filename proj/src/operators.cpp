#include "isotherm/operators.hpp"

#include "isotherm/error.hpp"
#include "isotherm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace isotherm {
namespace {

void require_square(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw ValidationError(std::string(what) + ": matrix must be square and non-empty");
    }
}

}  // namespace

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// ------------------------------------------------------------ HermitianOperator

HermitianOperator::HermitianOperator(const Matrix& entries) {
    require_square(entries, "HermitianOperator");
    const double asym = max_abs(entries - entries.adjoint());
    if (asym > kHermitianTolerance) {
        throw ValidationError("HermitianOperator: matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
    }
    entries_ = 0.5 * (entries + entries.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
    if (solver.info() != Eigen::Success) throw Error("HermitianOperator: eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
    return HermitianOperator(m);
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    return HermitianOperator(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) throw ValidationError("HermitianOperator +: dimension mismatch");
    return HermitianOperator(a.entries_ + b.entries_);
}

HermitianOperator operator*(double s, const HermitianOperator& a) { return HermitianOperator(s * a.entries_); }

// ---------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(const Matrix& entries) {
    require_square(entries, "DensityMatrix");
    const double asym = max_abs(entries - entries.adjoint());
    if (asym > kStateTolerance) {
        throw ValidationError("DensityMatrix: matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
    }
    const Complex tr = entries.trace();
    if (std::abs(tr.real() - 1.0) > kStateTolerance || std::abs(tr.imag()) > kStateTolerance) {
        throw ValidationError("DensityMatrix: trace must be 1 (got " + std::to_string(tr.real()) + ")");
    }
    entries_ = 0.5 * (entries + entries.adjoint());

    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
    if (solver.info() != Eigen::Success) throw Error("DensityMatrix: eigendecomposition failed");
    const RealVector& ev = solver.eigenvalues();
    if (ev.minCoeff() < -kEigenClip) {
        throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(ev.minCoeff()));
    }
    const auto n = static_cast<std::size_t>(ev.size());
    // Eigen returns ascending order; store descending.
    spectrum_.resize(n);
    eigenvectors_.resize(entries_.rows(), entries_.cols());
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto src = static_cast<Eigen::Index>(n - 1 - k);
        spectrum_[k] = std::max(0.0, ev(src));
        eigenvectors_.col(static_cast<Eigen::Index>(k)) = solver.eigenvectors().col(src);
        total += spectrum_[k];
    }
    for (double& p : spectrum_) p /= total;
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
    const auto n = static_cast<Eigen::Index>(probabilities.size());
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = probabilities[static_cast<std::size_t>(i)];
    return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return DensityMatrix(Matrix::Identity(n, n) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) throw ValidationError("DensityMatrix::pure: zero vector");
    const Eigen::VectorXcd v = psi / norm;
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::from_spectrum(const Matrix& basis, std::span<const double> probabilities) {
    if (static_cast<std::size_t>(basis.cols()) != probabilities.size()) {
        throw ValidationError("DensityMatrix::from_spectrum: basis/probability size mismatch");
    }
    RealVector p(static_cast<Eigen::Index>(probabilities.size()));
    for (std::size_t i = 0; i < probabilities.size(); ++i) p(static_cast<Eigen::Index>(i)) = probabilities[i];
    Matrix m = basis * p.cast<Complex>().asDiagonal() * basis.adjoint();
    return DensityMatrix(m);
}

std::size_t DensityMatrix::rank(double tol) const noexcept {
    return static_cast<std::size_t>(std::count_if(spectrum_.begin(), spectrum_.end(), [tol](double p) { return p > tol; }));
}

// --------------------------------------------------------------- SubsystemSplit

SubsystemSplit::SubsystemSplit(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ValidationError("SubsystemSplit: no parties");
    for (std::size_t d : dims_) {
        if (d == 0) throw ValidationError("SubsystemSplit: zero local dimension");
        total_ *= d;
    }
}

// ------------------------------------------------------------------- functions

double shannon_entropy(std::span<const double> probabilities) {
    return std::max(0.0, kernels::entropy(probabilities));
}

double entropy(const DensityMatrix& rho) {
    const double s = shannon_entropy(rho.spectrum());
    return std::min(s, std::log(static_cast<double>(rho.dim())));
}

double expectation(const HermitianOperator& a, const DensityMatrix& rho) {
    if (a.dim() != rho.dim()) throw ValidationError("expectation: dimension mismatch");
    const Complex v = a.matrix().cwiseProduct(rho.matrix().transpose()).sum();
    const double scale = std::max(1.0, max_abs(a.matrix()));
    if (std::abs(v.imag()) > kStateTolerance * scale) {
        throw Error("expectation: non-negligible imaginary part " + std::to_string(v.imag()));
    }
    return v.real();
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) { return DensityMatrix(kron(a.matrix(), b.matrix())); }

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor(std::span<const DensityMatrix> factors) {
    if (factors.empty()) throw ValidationError("tensor: no factors");
    Matrix m = factors.front().matrix();
    for (std::size_t i = 1; i < factors.size(); ++i) m = kron(m, factors[i].matrix());
    return DensityMatrix(m);
}

HermitianOperator kron_sum(const HermitianOperator& a, const HermitianOperator& b) {
    const auto da = static_cast<Eigen::Index>(a.dim());
    const auto db = static_cast<Eigen::Index>(b.dim());
    return HermitianOperator(kron(a.matrix(), Matrix::Identity(db, db)) + kron(Matrix::Identity(da, da), b.matrix()));
}

HermitianOperator kron_sum(std::span<const HermitianOperator> parts) {
    if (parts.empty()) throw ValidationError("kron_sum: no parts");
    Eigen::Index total = 1;
    for (const auto& p : parts) total *= static_cast<Eigen::Index>(p.dim());
    Matrix sum = Matrix::Zero(total, total);
    Eigen::Index before = 1;
    for (const auto& p : parts) {
        const auto d = static_cast<Eigen::Index>(p.dim());
        const Eigen::Index after = total / (before * d);
        sum += kron(kron(Matrix::Identity(before, before), p.matrix()), Matrix::Identity(after, after));
        before *= d;
    }
    return HermitianOperator(sum);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemSplit& split, std::span<const std::size_t> keep) {
    if (split.total_dim() != rho.dim()) throw ValidationError("partial_trace: split inconsistent with state dimension");
    const std::size_t n = split.parties();
    std::vector<bool> kept(n, false);
    std::size_t last = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= n || (i > 0 && keep[i] <= last)) {
            throw ValidationError("partial_trace: keep indices must be ascending party indices");
        }
        kept[keep[i]] = true;
        last = keep[i];
    }
    std::size_t dk = 1, dt = 1;
    for (std::size_t p = 0; p < n; ++p) (kept[p] ? dk : dt) *= split.dims()[p];

    // full index of (kept digit string, traced digit string)
    const std::size_t total = split.total_dim();
    std::vector<std::size_t> full(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx, ki = 0, ti = 0, kstride = 1, tstride = 1;
        for (std::size_t p = n; p-- > 0;) {
            const std::size_t d = split.dims()[p];
            const std::size_t digit = rem % d;
            rem /= d;
            if (kept[p]) {
                ki += digit * kstride;
                kstride *= d;
            } else {
                ti += digit * tstride;
                tstride *= d;
            }
        }
        full[ki * dt + ti] = idx;
    }

    const Matrix& m = rho.matrix();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t i = 0; i < dk; ++i) {
        for (std::size_t j = 0; j < dk; ++j) {
            Complex acc = 0.0;
            for (std::size_t t = 0; t < dt; ++t) {
                acc += m(static_cast<Eigen::Index>(full[i * dt + t]), static_cast<Eigen::Index>(full[j * dt + t]));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return DensityMatrix(out);
}

DensityMatrix marginal(const DensityMatrix& rho, const SubsystemSplit& split, std::size_t party) {
    const std::size_t keep[1] = {party};
    return partial_trace(rho, split, keep);
}

double mutual_information(const DensityMatrix& rho_ab, const SubsystemSplit& split) {
    if (split.parties() != 2) throw ValidationError("mutual_information: split must be bipartite");
    const double sa = entropy(marginal(rho_ab, split, 0));
    const double sb = entropy(marginal(rho_ab, split, 1));
    return sa + sb - entropy(rho_ab);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw ValidationError("relative_entropy: dimension mismatch");
    const Matrix& v = sigma.eigenvectors();
    double cross = 0.0;
    for (std::size_t k = 0; k < sigma.dim(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const double weight = (v.col(kk).adjoint() * rho.matrix() * v.col(kk))(0, 0).real();
        const double s = sigma.spectrum()[k];
        if (s <= 0.0) {
            if (weight > kEigenClip) throw DomainError("relative_entropy: support of rho not contained in support of sigma");
            continue;
        }
        cross += weight * std::log(s);
    }
    return -entropy(rho) - cross;
}

double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) throw ValidationError("commutator_norm: dimension mismatch");
    return max_abs(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

}  // namespace isotherm
