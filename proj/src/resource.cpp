#include "isotherm/resource.hpp"

#include "isotherm/error.hpp"
#include "isotherm/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isotherm {
namespace {

constexpr double kPointTol = 1e-12;

double boundary_entropy_at(const GibbsFamily& fam, double e) {
    return fam.boundary_entropy(fam.spontaneous_beta(std::clamp(e, fam.e_min(), fam.e_max())));
}

RateSolution finish(const DiagramPoint& x, const DiagramPoint& y, double t, PhiKind kind, const GibbsFamily& fam) {
    RateSolution s;
    s.ray_parameter = t;
    s.phi = {x.E + t * (x.E - y.E), x.S + t * (x.S - y.S)};
    if (kind == PhiKind::pure) s.phi.S = 0.0;
    s.phi_kind = kind;
    s.r = t / (1.0 + t);
    s.phi_beta = fam.spontaneous_beta(std::clamp(s.phi.E, fam.e_min(), fam.e_max()));
    s.collinearity_residual = std::max(std::fabs(x.E - (s.r * y.E + (1.0 - s.r) * s.phi.E)),
                                       std::fabs(x.S - (s.r * y.S + (1.0 - s.r) * s.phi.S)));
    s.entropy_form = y.S != s.phi.S ? (x.S - s.phi.S) / (y.S - s.phi.S) : std::numeric_limits<double>::quiet_NaN();
    return s;
}

}  // namespace

RateSolution conversion_rate(const DiagramPoint& x, const DiagramPoint& y, const GibbsFamily& fam) {
    const double de = x.E - y.E;
    const double ds = x.S - y.S;
    const double scale_e = std::max(1.0, fam.width());
    if (std::fabs(de) <= kPointTol * scale_e && std::fabs(ds) <= kPointTol) {
        RateSolution s;
        s.r = 1.0;
        s.phi = y;
        s.phi_kind = PhiKind::coincident;
        s.entropy_form = 1.0;
        s.phi_beta = fam.spontaneous_beta(std::clamp(y.E, fam.e_min(), fam.e_max()));
        return s;
    }

    // Parameter at which the ray leaves the spectral strip [E_min, E_max].
    double t_strip = std::numeric_limits<double>::infinity();
    if (de < 0.0) t_strip = (fam.e_min() - x.E) / de;
    if (de > 0.0) t_strip = (fam.e_max() - x.E) / de;
    t_strip = std::max(t_strip, 0.0);

    // Pure branch: the S = 0 crossing, taken whenever it lies inside the strip.
    if (ds < 0.0) {
        const double t0 = -x.S / ds;
        if (t0 <= t_strip * (1.0 + 1e-15)) {
            return finish(x, y, t0, t0 == 0.0 ? PhiKind::source_degenerate : PhiKind::pure, fam);
        }
    }
    // Both points pure: the ray runs along S = 0 until the strip ends.
    if (ds == 0.0 && x.S <= kPointTol) {
        return finish(x, y, t_strip, t_strip == 0.0 ? PhiKind::source_degenerate : PhiKind::pure, fam);
    }

    const auto h = [&](double t) { return boundary_entropy_at(fam, x.E + t * de) - (x.S + t * ds); };
    const double h0 = h(0.0);
    if (h0 <= kPointTol) return finish(x, y, 0.0, PhiKind::source_degenerate, fam);

    double t_hi = t_strip;
    if (!std::isfinite(t_hi)) t_hi = (std::log(static_cast<double>(fam.dim())) - x.S) / ds;
    const double h_hi = h(t_hi);
    if (h_hi >= 0.0) {
        // Exit through a vertical edge at E_min or E_max (degenerate extreme level).
        return finish(x, y, t_hi, PhiKind::thermal, fam);
    }
    const RootResult root = brent(h, 0.0, t_hi, h0, h_hi, 0.0, 0.0, 300);
    return finish(x, y, root.x, PhiKind::thermal, fam);
}

RateSolution conversion_rate(const DensityMatrix& rho, const DensityMatrix& sigma, const GibbsFamily& fam) {
    if (rho.dim() != fam.dim() || sigma.dim() != fam.dim()) {
        throw ValidationError("conversion_rate: states must belong to the given family");
    }
    const DiagramPoint x{expectation(fam.hamiltonian(), rho), entropy(rho)};
    const DiagramPoint y{expectation(fam.hamiltonian(), sigma), entropy(sigma)};
    return conversion_rate(x, y, fam);
}

double rate_entropy_only(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const double sr = entropy(rho);
    const double ss = entropy(sigma);
    if (ss <= 0.0) {
        if (sr > 0.0) throw DomainError("rate_entropy_only: target is pure but source is mixed");
        return std::numeric_limits<double>::infinity();
    }
    return std::max(0.0, sr / ss);
}

std::string_view name(PhiKind k) noexcept {
    switch (k) {
        case PhiKind::coincident: return "coincident";
        case PhiKind::pure: return "pure";
        case PhiKind::thermal: return "thermal";
        case PhiKind::source_degenerate: return "source-degenerate";
    }
    return "unknown";
}

}  // namespace isotherm
