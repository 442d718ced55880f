#include "isotherm/gibbs.hpp"

#include "isotherm/error.hpp"
#include "isotherm/kernels.hpp"
#include "isotherm/roots.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace isotherm {
namespace {

// Past this value of beta * gap every excited weight underflows to zero.
constexpr double kSaturation = 1500.0;

}  // namespace

GibbsFamily::GibbsFamily(HermitianOperator hamiltonian) : h_(std::move(hamiltonian)) {
    const RealVector& ev = h_.eigenvalues();
    energies_.assign(ev.data(), ev.data() + ev.size());
    const double scale = std::max({1.0, std::fabs(e_min()), std::fabs(e_max())});
    level_tol_ = 1e-12 * scale;
    g0_ = static_cast<std::size_t>(
        std::count_if(energies_.begin(), energies_.end(), [&](double e) { return e - e_min() <= level_tol_; }));
    gtop_ = static_cast<std::size_t>(
        std::count_if(energies_.begin(), energies_.end(), [&](double e) { return e_max() - e <= level_tol_; }));
}

// Fills w_i = exp(-beta (e_i - ref)) and returns ln sum w. The reference level
// contributes exact ones, so the sum is split as g + tail for a log1p.
double GibbsFamily::shifted_weights(double beta, std::vector<double>& w, double& ref) const {
    ref = beta >= 0.0 ? e_min() : e_max();
    w.resize(energies_.size());
    kernels::exp_weights(energies_, beta, ref, w);
    double g = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < energies_.size(); ++i) {
        if (energies_[i] == ref) {
            g += 1.0;
        } else {
            tail += w[i];
        }
    }
    return std::log(g) + std::log1p(tail / g);
}

ThermalPoint GibbsFamily::evaluate(BetaValue beta) const {
    ThermalPoint pt;
    const double b = beta.value();
    const double ln_d = std::log(static_cast<double>(dim()));
    if (!beta.is_finite()) {
        const bool ground = beta.is_plus_infinity();
        const std::size_t g = ground ? g0_ : gtop_;
        double e = 0.0;
        for (std::size_t i = 0; i < g; ++i) e += ground ? energies_[i] : energies_[dim() - 1 - i];
        pt.energy = e / static_cast<double>(g);
        pt.entropy = std::log(static_cast<double>(g));
        pt.log_z = std::nan("");
        return pt;
    }
    if (b == 0.0) {
        double e = 0.0;
        for (double x : energies_) e += x;
        pt.energy = e / static_cast<double>(dim());
        pt.entropy = ln_d;
        pt.log_z = ln_d;
        double var = 0.0;
        for (double x : energies_) var += (x - pt.energy) * (x - pt.energy);
        pt.variance = var / static_cast<double>(dim());
        return pt;
    }
    std::vector<double> w;
    double ref = 0.0;
    const double ln_sum = shifted_weights(b, w, ref);
    const kernels::Moments m = kernels::moments(w, energies_, ref);
    pt.energy = ref + m.mean;
    pt.entropy = std::clamp(b * m.mean + ln_sum, 0.0, ln_d);
    pt.log_z = -b * ref + ln_sum;
    pt.variance = m.variance;
    return pt;
}

std::vector<double> GibbsFamily::populations(BetaValue beta) const {
    std::vector<double> p(dim(), 0.0);
    if (!beta.is_finite()) {
        const bool ground = beta.is_plus_infinity();
        const std::size_t g = ground ? g0_ : gtop_;
        for (std::size_t i = 0; i < g; ++i) p[ground ? i : dim() - 1 - i] = 1.0 / static_cast<double>(g);
        return p;
    }
    double ref = 0.0;
    shifted_weights(beta.value(), p, ref);
    double total = 0.0;
    for (double x : p) total += x;
    for (double& x : p) x /= total;
    return p;
}

DensityMatrix GibbsFamily::state(BetaValue beta) const {
    const std::vector<double> p = populations(beta);
    return DensityMatrix::from_spectrum(h_.eigenvectors(), p);
}

double GibbsFamily::log_partition(double beta) const {
    if (!std::isfinite(beta)) throw DomainError("log_partition: beta must be finite");
    return evaluate(BetaValue(beta)).log_z;
}

BetaValue GibbsFamily::intrinsic_beta(double target) const {
    const double ln_d = std::log(static_cast<double>(dim()));
    if (!(target >= -1e-12 && target <= ln_d + 1e-12)) {
        throw DomainError("intrinsic_beta: entropy " + std::to_string(target) + " outside [0, ln d]");
    }
    if (target >= ln_d) return BetaValue(0.0);
    if (target <= std::log(static_cast<double>(g0_))) return BetaValue::plus_infinity();

    const double gap = energies_[g0_] - e_min();
    const auto f = [this, target](double b) { return evaluate(BetaValue(b)).entropy - target; };
    double hi = 1.0 / std::max(width(), 1e-300);
    double fhi = f(hi);
    while (fhi > 0.0) {
        if (hi * gap > kSaturation) return BetaValue::plus_infinity();
        hi *= 2.0;
        fhi = f(hi);
    }
    const RootResult r = brent(f, 0.0, hi, ln_d - target, fhi, 0.0, 0.0, 300);
    return BetaValue(r.x);
}

BetaValue GibbsFamily::spontaneous_beta(double target) const {
    const double tol = 1e-12 * std::max({1.0, std::fabs(e_min()), std::fabs(e_max())});
    if (!(target >= e_min() - tol && target <= e_max() + tol)) {
        throw DomainError("spontaneous_beta: energy " + std::to_string(target) + " outside the spectrum");
    }
    if (is_flat()) return BetaValue(0.0);
    if (target <= e_min()) return BetaValue::plus_infinity();
    if (target >= e_max()) return BetaValue::minus_infinity();

    const double e0 = evaluate(BetaValue(0.0)).energy;
    if (target == e0) return BetaValue(0.0);
    const auto f = [this, target](double b) { return evaluate(BetaValue(b)).energy - target; };
    const double step = 1.0 / std::max(width(), 1e-300);
    if (target < e0) {
        const double gap = energies_[g0_] - e_min();
        double hi = step, fhi = f(hi);
        while (fhi > 0.0) {
            if (hi * gap > kSaturation) return BetaValue::plus_infinity();
            hi *= 2.0;
            fhi = f(hi);
        }
        return BetaValue(brent(f, 0.0, hi, e0 - target, fhi, 0.0, 0.0, 300).x);
    }
    const double gap = e_max() - energies_[dim() - 1 - gtop_];
    double lo = -step, flo = f(lo);
    while (flo < 0.0) {
        if (-lo * gap > kSaturation) return BetaValue::minus_infinity();
        lo *= 2.0;
        flo = f(lo);
    }
    return BetaValue(brent(f, lo, 0.0, flo, e0 - target, 0.0, 0.0, 300).x);
}

DensityMatrix gibbs_state(const GibbsFamily& fam, BetaValue beta) { return fam.state(beta); }
double log_partition(const GibbsFamily& fam, double beta) { return fam.log_partition(beta); }
double boundary_entropy(const GibbsFamily& fam, BetaValue beta) { return fam.boundary_entropy(beta); }
double boundary_energy(const GibbsFamily& fam, BetaValue beta) { return fam.boundary_energy(beta); }
BetaValue intrinsic_beta(const GibbsFamily& fam, double target) { return fam.intrinsic_beta(target); }
BetaValue spontaneous_beta(const GibbsFamily& fam, double target) { return fam.spontaneous_beta(target); }

}  // namespace isotherm
