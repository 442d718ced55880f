#include "isotherm/energetics.hpp"

#include "isotherm/error.hpp"
#include "isotherm/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace isotherm {
namespace {

void check_dims(const DensityMatrix& rho, const GibbsFamily& fam) {
    if (rho.dim() != fam.dim()) throw ValidationError("state and Hamiltonian dimensions differ");
}

VariationalResult scan(const std::function<double(double)>& f, std::span<const double> grid, bool log_refine) {
    if (grid.size() < 3) throw ValidationError("variational grid needs at least 3 points");
    std::vector<double> vals(grid.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = f(grid[i]);
        if (vals[i] < vals[k]) k = i;
    }
    VariationalResult r;
    r.grid_min = vals[k];
    r.grid_argmin = grid[k];
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == grid.size() ? k : k + 1;
    r.grid_step = std::max(grid[k] - grid[lo], grid[hi] - grid[k]);

    MinResult m;
    if (log_refine && grid[lo] > 0.0) {
        m = golden_min([&](double u) { return f(std::exp(u)); }, std::log(grid[lo]), std::log(grid[hi]), 1e-13);
        m.x = std::exp(m.x);
    } else {
        m = golden_min(f, grid[lo], grid[hi], 1e-13 * std::max(1.0, std::fabs(grid[k])));
    }
    if (m.fx <= r.grid_min) {
        r.refined_min = m.fx;
        r.refined_argmin = m.x;
    } else {
        r.refined_min = r.grid_min;
        r.refined_argmin = r.grid_argmin;
    }
    return r;
}

}  // namespace

double bound_energy_at_entropy(const GibbsFamily& fam, double s) {
    return fam.boundary_energy(fam.intrinsic_beta(s));
}

double bound_energy(const DensityMatrix& rho, const GibbsFamily& fam) {
    check_dims(rho, fam);
    return bound_energy_at_entropy(fam, entropy(rho));
}

double free_energy_raw(const DensityMatrix& rho, const GibbsFamily& fam) {
    check_dims(rho, fam);
    return expectation(fam.hamiltonian(), rho) - bound_energy(rho, fam);
}

double free_energy(const DensityMatrix& rho, const GibbsFamily& fam) {
    const double f = free_energy_raw(rho, fam);
    return std::fabs(f) < kFreeEnergySnap ? 0.0 : f;
}

double relative_entropy_check(const DensityMatrix& rho, const GibbsFamily& fam) {
    check_dims(rho, fam);
    const BetaValue beta = fam.intrinsic_beta(entropy(rho));
    const double f = free_energy(rho, fam);
    if (beta.value() == 0.0) return std::fabs(f);
    if (!beta.is_finite()) throw DomainError("relative_entropy_check: intrinsic temperature is zero");
    const double d = relative_entropy(rho, fam.state(beta));
    return std::fabs(f - d / beta.value());
}

double beta_free_energy(const DensityMatrix& rho, const GibbsFamily& fam, double beta) {
    if (!std::isfinite(beta) || beta == 0.0) throw DomainError("beta_free_energy: beta must be finite and nonzero");
    return beta_athermality(rho, fam, beta) / beta;
}

double athermality(const DensityMatrix& rho, const GibbsFamily& fam) {
    check_dims(rho, fam);
    const BetaValue bt = fam.spontaneous_beta(expectation(fam.hamiltonian(), rho));
    const double a = fam.boundary_entropy(bt) - entropy(rho);
    return std::fabs(a) < kFreeEnergySnap ? 0.0 : a;
}

double beta_athermality(const DensityMatrix& rho, const GibbsFamily& fam, double beta) {
    check_dims(rho, fam);
    if (!std::isfinite(beta)) throw DomainError("beta_athermality: beta must be finite");
    const ThermalPoint pt = fam.evaluate(BetaValue(beta));
    // (beta E + ln Z) - S, written relative to the Gibbs point so that the
    // cancellation happens between like-sized terms.
    const double e = expectation(fam.hamiltonian(), rho);
    return beta * (e - pt.energy) + (pt.entropy - entropy(rho));
}

EnergeticsReport analyze(const DensityMatrix& rho, const GibbsFamily& fam) {
    check_dims(rho, fam);
    EnergeticsReport r;
    r.energy = expectation(fam.hamiltonian(), rho);
    r.entropy = entropy(rho);
    r.intrinsic_beta = fam.intrinsic_beta(r.entropy);
    r.bound_energy = fam.boundary_energy(r.intrinsic_beta);
    const double f = r.energy - r.bound_energy;
    r.free_energy = std::fabs(f) < kFreeEnergySnap ? 0.0 : f;
    r.spontaneous_beta = fam.spontaneous_beta(r.energy);
    const double a = fam.boundary_entropy(r.spontaneous_beta) - r.entropy;
    r.athermality = std::fabs(a) < kFreeEnergySnap ? 0.0 : a;
    return r;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > lo) || n < 2) throw ValidationError("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> symmetric_log_grid(double min_abs, double max_abs, std::size_t n) {
    if (n < 3 || n % 2 == 0) throw ValidationError("symmetric_log_grid: n must be odd and >= 3");
    const std::vector<double> side = log_grid(min_abs, max_abs, (n - 1) / 2);
    std::vector<double> g;
    g.reserve(n);
    for (auto it = side.rbegin(); it != side.rend(); ++it) g.push_back(-*it);
    g.push_back(0.0);
    g.insert(g.end(), side.begin(), side.end());
    return g;
}

VariationalResult variational_free_energy(const DensityMatrix& rho, const GibbsFamily& fam,
                                          std::span<const double> grid) {
    std::vector<double> own;
    if (grid.empty()) {
        const BetaValue b = fam.intrinsic_beta(entropy(rho));
        own = (b.is_finite() && b.value() > 0.0) ? log_grid(b.value() / 10.0, 10.0 * b.value(), 2001)
                                                  : log_grid(1e-3, 1e3, 2001);
        grid = own;
    }
    for (double b : grid) {
        if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("variational_free_energy: grid must be positive");
    }
    return scan([&](double b) { return beta_free_energy(rho, fam, b); }, grid, true);
}

VariationalResult variational_athermality(const DensityMatrix& rho, const GibbsFamily& fam,
                                          std::span<const double> grid) {
    std::vector<double> own;
    if (grid.empty()) {
        own = symmetric_log_grid(1e-3, 1e3, 2001);
        grid = own;
    }
    return scan([&](double b) { return beta_athermality(rho, fam, b); }, grid, false);
}

}  // namespace isotherm
