#include "isotherm/equilibrium.hpp"

#include "isotherm/energetics.hpp"
#include "isotherm/error.hpp"
#include "isotherm/roots.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace isotherm {
namespace {

constexpr double kSaturation = 1500.0;

double ground_gap(const GibbsFamily& f) {
    return f.is_flat() ? 0.0 : f.energies()[f.ground_degeneracy()] - f.e_min();
}
double top_gap(const GibbsFamily& f) {
    return f.is_flat() ? 0.0 : f.e_max() - f.energies()[f.dim() - 1 - f.top_degeneracy()];
}
double min_width(std::span<const WeightedFamily> parts) {
    double w = 0.0;
    for (const auto& p : parts) w = std::max(w, p.family->width());
    return w;
}

void check_parts(std::span<const WeightedFamily> parts) {
    if (parts.empty()) throw ValidationError("joint solve: no subsystems");
    for (const auto& p : parts) {
        if (p.family == nullptr || !(p.copies > 0.0)) throw ValidationError("joint solve: invalid subsystem");
    }
}

std::vector<WeightedFamily> weighted(std::span<const GibbsFamily> fams) {
    std::vector<WeightedFamily> parts;
    for (const auto& f : fams) parts.push_back({&f, 1.0});
    return parts;
}

EquilibrationOutcome finish(EquilibrationMode mode, BetaValue beta, bool degenerate, std::span<const GibbsFamily> fams,
                            double e0, double s0) {
    EquilibrationOutcome out;
    out.mode = mode;
    out.beta_joint = beta;
    out.degenerate = degenerate;
    out.initial_energy = e0;
    out.initial_entropy = s0;
    for (const auto& f : fams) {
        const ThermalPoint pt = f.evaluate(beta);
        out.final_locals.push_back(f.state(beta));
        out.final_energy += pt.energy;
        out.final_entropy += pt.entropy;
    }
    out.work_released = e0 - out.final_energy;
    out.entropy_produced = out.final_entropy - s0;
    return out;
}

}  // namespace

JointSolve solve_joint_entropy(std::span<const WeightedFamily> parts, double target) {
    check_parts(parts);
    double s_max = 0.0, s_min = 0.0;
    for (const auto& p : parts) {
        s_max += p.copies * std::log(static_cast<double>(p.family->dim()));
        s_min += p.copies * std::log(static_cast<double>(p.family->ground_degeneracy()));
    }
    if (!(target >= -1e-12 && target <= s_max + 1e-12)) {
        throw DomainError("joint entropy " + std::to_string(target) + " outside the attainable range");
    }
    if (target >= s_max) return {BetaValue(0.0), false};
    if (target <= s_min) return {BetaValue::plus_infinity(), target < s_min - 1e-12};

    const auto f = [&](double b) {
        double s = 0.0;
        for (const auto& p : parts) s += p.copies * p.family->boundary_entropy(BetaValue(b));
        return s - target;
    };
    double hi = 1.0 / std::max(min_width(parts), 1e-300), fhi = f(hi);
    while (fhi > 0.0) {
        bool saturated = true;
        for (const auto& p : parts) saturated = saturated && (p.family->is_flat() || hi * ground_gap(*p.family) > kSaturation);
        if (saturated) return {BetaValue::plus_infinity(), false};
        hi *= 2.0;
        fhi = f(hi);
    }
    return {BetaValue(brent(f, 0.0, hi, s_max - target, fhi, 0.0, 0.0, 300).x), false};
}

BetaValue solve_joint_energy(std::span<const WeightedFamily> parts, double target) {
    check_parts(parts);
    double lo_e = 0.0, hi_e = 0.0, e0 = 0.0, scale = 1.0;
    bool flat = true;
    for (const auto& p : parts) {
        lo_e += p.copies * p.family->e_min();
        hi_e += p.copies * p.family->e_max();
        e0 += p.copies * p.family->boundary_energy(BetaValue(0.0));
        scale = std::max({scale, std::fabs(p.copies * p.family->e_min()), std::fabs(p.copies * p.family->e_max())});
        flat = flat && p.family->is_flat();
    }
    const double tol = 1e-12 * scale;
    if (!(target >= lo_e - tol && target <= hi_e + tol)) {
        throw DomainError("joint energy " + std::to_string(target) + " outside the attainable range");
    }
    if (flat) return BetaValue(0.0);
    if (target <= lo_e) return BetaValue::plus_infinity();
    if (target >= hi_e) return BetaValue::minus_infinity();
    if (target == e0) return BetaValue(0.0);

    const auto f = [&](double b) {
        double e = 0.0;
        for (const auto& p : parts) e += p.copies * p.family->boundary_energy(BetaValue(b));
        return e - target;
    };
    const double step = 1.0 / std::max(min_width(parts), 1e-300);
    const auto saturated = [&](double b) {
        for (const auto& p : parts) {
            const double gap = b > 0.0 ? ground_gap(*p.family) : top_gap(*p.family);
            if (!p.family->is_flat() && std::fabs(b) * gap <= kSaturation) return false;
        }
        return true;
    };
    if (target < e0) {
        double hi = step, fhi = f(hi);
        while (fhi > 0.0) {
            if (saturated(hi)) return BetaValue::plus_infinity();
            hi *= 2.0;
            fhi = f(hi);
        }
        return BetaValue(brent(f, 0.0, hi, e0 - target, fhi, 0.0, 0.0, 300).x);
    }
    double lo = -step, flo = f(lo);
    while (flo < 0.0) {
        if (saturated(lo)) return BetaValue::minus_infinity();
        lo *= 2.0;
        flo = f(lo);
    }
    return BetaValue(brent(f, lo, 0.0, flo, e0 - target, 0.0, 0.0, 300).x);
}

DensityMatrix EquilibrationOutcome::final_state() const { return tensor(std::span<const DensityMatrix>(final_locals)); }

EquilibriumVerdict is_equilibrium(const DensityMatrix& rho_joint, std::span<const GibbsFamily> fams,
                                  const SubsystemSplit& split) {
    if (fams.size() != split.parties()) throw ValidationError("is_equilibrium: one family per party required");
    std::vector<HermitianOperator> hs;
    for (std::size_t i = 0; i < fams.size(); ++i) {
        if (fams[i].dim() != split.dims()[i]) throw ValidationError("is_equilibrium: family/split dimension mismatch");
        hs.push_back(fams[i].hamiltonian());
    }
    const GibbsFamily joint(kron_sum(std::span<const HermitianOperator>(hs)));
    EquilibriumVerdict v;
    v.free_energy = free_energy(rho_joint, joint);
    v.equilibrium = v.free_energy <= 1e-8;
    return v;
}

EquilibrationOutcome equilibrate_isoentropic(std::span<const Subsystem> locals) {
    if (locals.size() < 2) throw ValidationError("equilibration needs at least two subsystems");
    std::vector<GibbsFamily> fams;
    double e0 = 0.0, s0 = 0.0;
    for (const auto& l : locals) {
        if (l.state.dim() != l.family.dim()) throw ValidationError("equilibration: state/family dimension mismatch");
        fams.push_back(l.family);
        e0 += expectation(l.family.hamiltonian(), l.state);
        s0 += entropy(l.state);
    }
    const auto parts = weighted(fams);
    const JointSolve js = solve_joint_entropy(parts, s0);
    return finish(EquilibrationMode::isoentropic, js.beta, js.degenerate, fams, e0, s0);
}

EquilibrationOutcome equilibrate_isoentropic(const DensityMatrix& rho_joint, std::span<const GibbsFamily> fams,
                                             const SubsystemSplit& split) {
    if (fams.size() < 2 || fams.size() != split.parties()) {
        throw ValidationError("equilibration needs one family per party and at least two parties");
    }
    double e0 = 0.0;
    for (std::size_t i = 0; i < fams.size(); ++i) {
        e0 += expectation(fams[i].hamiltonian(), marginal(rho_joint, split, i));
    }
    const double s0 = entropy(rho_joint);
    const auto parts = weighted(fams);
    const JointSolve js = solve_joint_entropy(parts, s0);
    return finish(EquilibrationMode::isoentropic, js.beta, js.degenerate, fams, e0, s0);
}

EquilibrationOutcome equilibrate_isoenergetic(std::span<const Subsystem> locals) {
    if (locals.size() < 2) throw ValidationError("equilibration needs at least two subsystems");
    std::vector<GibbsFamily> fams;
    double e0 = 0.0, s0 = 0.0;
    for (const auto& l : locals) {
        if (l.state.dim() != l.family.dim()) throw ValidationError("equilibration: state/family dimension mismatch");
        fams.push_back(l.family);
        e0 += expectation(l.family.hamiltonian(), l.state);
        s0 += entropy(l.state);
    }
    const auto parts = weighted(fams);
    const BetaValue beta = solve_joint_energy(parts, e0);
    return finish(EquilibrationMode::isoenergetic, beta, false, fams, e0, s0);
}

bool lemma3_check(BetaValue beta_a, BetaValue beta_b, const EquilibrationOutcome& outcome) {
    const double lo = std::min(beta_a.value(), beta_b.value());
    const double hi = std::max(beta_a.value(), beta_b.value());
    const double b = outcome.beta_joint.value();
    return b >= lo - 1e-9 && b <= hi + 1e-9;
}

}  // namespace isotherm
