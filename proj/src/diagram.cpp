#include "isotherm/diagram.hpp"

#include "isotherm/energetics.hpp"
#include "isotherm/error.hpp"
#include "isotherm/roots.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace isotherm {
namespace {

constexpr double kSaturation = 1500.0;

// Smallest beta >= 0 bracket end where g changes sign, then bisection.
BetaValue bisect_positive(const GibbsFamily& fam, const std::function<double(double)>& g, double gap) {
    double hi = 1.0 / std::max(fam.width(), 1e-300);
    while (g(hi) > 0.0) {
        if (hi * gap > kSaturation) return BetaValue::plus_infinity();
        hi *= 2.0;
    }
    return BetaValue(bisect(g, 0.0, hi).x);
}

}  // namespace

BoundarySample sample_boundary(const GibbsFamily& fam, double beta_min, double beta_max, std::size_t n) {
    if (!(beta_min < beta_max)) throw ValidationError("sample_boundary: need beta_min < beta_max");
    if (n < 3) throw ValidationError("sample_boundary: need at least 3 points");
    const double bc = fam.width() > 0.0 ? 2.0 / fam.width() : 1.0;
    const double t0 = std::tanh(beta_min / bc);
    const double t1 = std::tanh(beta_max / bc);
    BoundarySample out;
    out.betas.resize(n);
    out.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double b;
        if (i == 0) {
            b = beta_min;
        } else if (i + 1 == n) {
            b = beta_max;
        } else {
            const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
            b = bc * std::atanh(t);
        }
        out.betas[i] = b;
        const ThermalPoint pt = fam.evaluate(BetaValue(b));
        out.points[i] = {pt.energy, pt.entropy};
    }
    return out;
}

Projection project_state(const DensityMatrix& rho, const GibbsFamily& fam) {
    if (rho.dim() != fam.dim()) throw ValidationError("project_state: dimension mismatch");
    Projection p;
    p.point = {expectation(fam.hamiltonian(), rho), entropy(rho)};

    // Horizontal foot: boundary point with S = S(rho) on the beta >= 0 branch.
    const double ln_d = std::log(static_cast<double>(fam.dim()));
    const double s = p.point.S;
    if (s >= ln_d) {
        p.tangent_beta = BetaValue(0.0);
    } else if (s <= std::log(static_cast<double>(fam.ground_degeneracy()))) {
        p.tangent_beta = BetaValue::plus_infinity();
    } else {
        const double gap = fam.energies()[fam.ground_degeneracy()] - fam.e_min();
        p.tangent_beta = bisect_positive(fam, [&](double b) { return fam.boundary_entropy(BetaValue(b)) - s; }, gap);
    }
    p.bound_energy = fam.boundary_energy(p.tangent_beta);
    p.free_energy = p.point.E - p.bound_energy;

    // Vertical foot: boundary point with E = E(rho), either branch.
    const double e = p.point.E;
    const double e0 = fam.boundary_energy(BetaValue(0.0));
    if (fam.is_flat() || e == e0) {
        p.spontaneous_beta = BetaValue(0.0);
    } else if (e <= fam.e_min()) {
        p.spontaneous_beta = BetaValue::plus_infinity();
    } else if (e >= fam.e_max()) {
        p.spontaneous_beta = BetaValue::minus_infinity();
    } else if (e < e0) {
        const double gap = fam.energies()[fam.ground_degeneracy()] - fam.e_min();
        p.spontaneous_beta = bisect_positive(fam, [&](double b) { return fam.boundary_energy(BetaValue(b)) - e; }, gap);
    } else {
        // mirror: E(-b) for b >= 0 is increasing, so negate to keep the same sign convention
        const double gap = fam.e_max() - fam.energies()[fam.dim() - 1 - fam.top_degeneracy()];
        const BetaValue m =
            bisect_positive(fam, [&](double b) { return e - fam.boundary_energy(BetaValue(-b)); }, gap);
        p.spontaneous_beta = m.is_finite() ? BetaValue(-m.value()) : BetaValue::minus_infinity();
    }
    p.athermality = fam.boundary_entropy(p.spontaneous_beta) - p.point.S;
    return p;
}

TangentLine tangent_line(const GibbsFamily& fam, double beta) {
    if (!std::isfinite(beta)) throw DomainError("tangent_line: beta must be finite");
    const ThermalPoint pt = fam.evaluate(BetaValue(beta));
    return {beta, pt.entropy - beta * pt.energy};
}

double tangent_gap(const DensityMatrix& rho, const GibbsFamily& fam, double beta) {
    const TangentLine t = tangent_line(fam, beta);
    return t.at(expectation(fam.hamiltonian(), rho)) - entropy(rho);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_diagram_csv(std::ostream& out, const BoundarySample& sample, const std::vector<LabeledState>& states,
                       const GibbsFamily& fam) {
    out << "beta,E,S\n";
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        out << format_number(sample.betas[i]) << ',' << format_number(sample.points[i].E) << ','
            << format_number(sample.points[i].S) << '\n';
    }
    if (states.empty()) return;
    out << "\nlabel,E,S,F,B,A,beta_intrinsic,beta_spontaneous\n";
    for (const auto& ls : states) {
        const EnergeticsReport r = analyze(ls.state, fam);
        out << ls.label << ',' << format_number(r.energy) << ',' << format_number(r.entropy) << ','
            << format_number(r.free_energy) << ',' << format_number(r.bound_energy) << ','
            << format_number(r.athermality) << ',' << format_number(r.intrinsic_beta.value()) << ','
            << format_number(r.spontaneous_beta.value()) << '\n';
    }
}

std::string diagram_csv(const BoundarySample& sample, const std::vector<LabeledState>& states, const GibbsFamily& fam) {
    std::ostringstream os;
    write_diagram_csv(os, sample, states, fam);
    return os.str();
}

void export_diagram(const BoundarySample& sample, const std::vector<LabeledState>& states, const GibbsFamily& fam,
                    const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("export_diagram: cannot open " + path);
    write_diagram_csv(f, sample, states, fam);
    f.flush();
    if (!f) throw Error("export_diagram: write failed for " + path);
}

}  // namespace isotherm
