// Shared generators and reference computations for the test suites. The
// reference routines use long double loops and their own bisection so that
// they do not share code paths with the library solvers.

#pragma once

#include "isotherm/gibbs.hpp"
#include "isotherm/operators.hpp"
#include "isotherm/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace testing {

using namespace isotherm;

// ---------------------------------------------------------------- generators

class Gen {
  public:
    explicit Gen(std::uint64_t seed, std::uint64_t stream = 0) : rng_(make_rng(seed, stream)) {}

    Rng& rng() { return rng_; }

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    std::size_t integer(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

    // log-uniform magnitude, random sign
    double beta(double lo = 0.05, double hi = 5.0, bool signed_ = false) {
        const double m = std::exp(uniform(std::log(lo), std::log(hi)));
        return signed_ && coin() ? -m : m;
    }

    std::vector<double> probabilities(std::size_t d) {
        std::vector<double> p(d);
        double s = 0.0;
        for (auto& x : p) s += (x = -std::log(uniform(1e-300, 1.0)));
        for (auto& x : p) x /= s;
        return p;
    }

    // Sorted spectrum with gaps bounded away from zero.
    std::vector<double> spectrum(std::size_t d, double scale = 1.0) {
        std::vector<double> e(d);
        double acc = uniform(-1.0, 1.0) * scale;
        for (auto& x : e) {
            x = acc;
            acc += uniform(0.05, 1.0) * scale;
        }
        return e;
    }

    HermitianOperator diagonal_hamiltonian(std::size_t d) { return HermitianOperator::diagonal(spectrum(d)); }

    // Non-diagonal Hamiltonian with a prescribed non-degenerate spectrum.
    HermitianOperator hamiltonian(std::size_t d) {
        const auto e = spectrum(d);
        const Matrix u = haar_unitary(d, rng_);
        Eigen::VectorXcd ev(static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i) ev(static_cast<Eigen::Index>(i)) = e[i];
        return HermitianOperator(u * ev.asDiagonal() * u.adjoint());
    }

    // Full rank, reduced rank or diagonal, chosen at random.
    DensityMatrix state(std::size_t d) {
        switch (integer(0, 3)) {
            case 0: return random_state(d, rng_);
            case 1: return random_state(d, integer(1, d), rng_);
            case 2: return DensityMatrix::diagonal(probabilities(d));
            default: return DensityMatrix::from_spectrum(haar_unitary(d, rng_), probabilities(d));
        }
    }

    DensityMatrix full_rank_state(std::size_t d) {
        return DensityMatrix::from_spectrum(haar_unitary(d, rng_), probabilities(d));
    }

  private:
    Rng rng_;
};

// ---------------------------------------------------------------- oracles

struct RefPoint {
    long double E{0}, S{0}, log_z{0};
};

inline RefPoint ref_gibbs(const std::vector<double>& energies, long double beta) {
    const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
    const long double ref = beta >= 0 ? *lo : *hi;
    long double z = 0, e1 = 0;
    for (double e : energies) {
        const long double w = std::exp(-beta * (static_cast<long double>(e) - ref));
        z += w;
        e1 += w * e;
    }
    RefPoint p;
    p.E = e1 / z;
    p.log_z = std::log(z) - beta * ref;
    p.S = beta * p.E + p.log_z;
    return p;
}

inline long double ref_bisect(const std::function<long double(long double)>& f, long double a, long double b) {
    long double fa = f(a);
    for (int i = 0; i < 200; ++i) {
        const long double m = 0.5L * (a + b);
        const long double fm = f(m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5L * (a + b);
}

// beta >= 0 with S(gamma_beta) = s
inline long double ref_intrinsic_beta(const std::vector<double>& energies, long double s) {
    return ref_bisect([&](long double b) { return ref_gibbs(energies, b).S - s; }, 0.0L, 1e4L);
}

// beta with E(gamma_beta) = e
inline long double ref_spontaneous_beta(const std::vector<double>& energies, long double e) {
    return ref_bisect([&](long double b) { return e - ref_gibbs(energies, b).E; }, -1e4L, 1e4L);
}

inline long double ref_bound_energy(const std::vector<double>& energies, long double s) {
    return ref_gibbs(energies, ref_intrinsic_beta(energies, s)).E;
}

inline long double ref_shannon(const std::vector<double>& p) {
    long double s = 0;
    for (double x : p) {
        if (x > 0) s -= static_cast<long double>(x) * std::log(static_cast<long double>(x));
    }
    return s;
}

inline double binary_entropy(double p) {
    return (p <= 0.0 || p >= 1.0) ? 0.0 : -p * std::log(p) - (1 - p) * std::log(1 - p);
}

// Eigenvalues through the general complex solver, independent of the
// self-adjoint path the library uses.
inline std::vector<double> ref_eigenvalues(const Matrix& m) {
    Eigen::ComplexEigenSolver<Matrix> es(m);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i).real());
    std::sort(out.begin(), out.end());
    return out;
}

inline long double ref_entropy(const Matrix& rho) {
    auto ev = ref_eigenvalues(rho);
    for (auto& x : ev) x = std::max(0.0, x);
    return ref_shannon(ev);
}

inline double ref_expectation(const Matrix& h, const Matrix& rho) { return (h * rho).trace().real(); }

inline long double ref_free_energy(const Matrix& h, const Matrix& rho) {
    const auto e = ref_eigenvalues(h);
    return ref_expectation(h, rho) - ref_bound_energy(e, ref_entropy(rho));
}

// Partial trace by explicit index sums.
inline Matrix ref_partial_trace_b(const Matrix& rho, std::size_t da, std::size_t db) {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (std::size_t k = 0; k < db; ++k)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    rho(static_cast<Eigen::Index>(i * db + k), static_cast<Eigen::Index>(j * db + k));
    return out;
}

inline Matrix ref_partial_trace_a(const Matrix& rho, std::size_t da, std::size_t db) {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db));
    for (std::size_t i = 0; i < db; ++i)
        for (std::size_t j = 0; j < db; ++j)
            for (std::size_t k = 0; k < da; ++k)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    rho(static_cast<Eigen::Index>(k * db + i), static_cast<Eigen::Index>(k * db + j));
    return out;
}

// Unitary that is block diagonal on the joint level sets of diagonal charges:
// it commutes with every diag(levels[k]).
inline Matrix charge_conserving_unitary(const std::vector<std::vector<double>>& levels, Rng& rng) {
    const std::size_t d = levels.front().size();
    std::map<std::vector<long long>, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<long long> key;
        for (const auto& l : levels) key.push_back(std::llround(l[i] * 1e9));
        blocks[key].push_back(i);
    }
    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const auto& [key, idx] : blocks) {
        const Matrix b = haar_unitary(idx.size(), rng);
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                u(static_cast<Eigen::Index>(idx[r]), static_cast<Eigen::Index>(idx[c])) =
                    b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    return u;
}

inline Matrix expm_hermitian(const HermitianOperator& g, double t) {
    Eigen::VectorXcd ph(static_cast<Eigen::Index>(g.dim()));
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::exp(Complex(0.0, -t * g.eigenvalues()(i)));
    return g.eigenvectors() * ph.asDiagonal() * g.eigenvectors().adjoint();
}

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

}  // namespace testing
