#include "isotherm/processes.hpp"

#include "isotherm/energetics.hpp"
#include "isotherm/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace isotherm {
namespace {

const std::size_t kKeepA[1] = {0};
const std::size_t kKeepB[1] = {1};

SubsystemSplit checked_split(SubsystemSplit split, const DensityMatrix& rho, const GibbsFamily& a,
                             const GibbsFamily& b) {
    if (split.parties() != 2) throw ValidationError("process: split must be bipartite");
    if (split.dims()[0] != a.dim() || split.dims()[1] != b.dim() || split.total_dim() != rho.dim()) {
        throw ValidationError("process: split inconsistent with families or state");
    }
    return split;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, n = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        n += 1.0;
    }
    if (n < 2.0) return std::numeric_limits<double>::infinity();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Matrix exp_i(const HermitianOperator& g, double delta) {
    const Eigen::VectorXcd phases =
        (g.eigenvalues().cast<Complex>() * Complex(0.0, -delta)).array().exp().matrix();
    return g.eigenvectors() * phases.asDiagonal() * g.eigenvectors().adjoint();
}

}  // namespace

ProcessRecord::ProcessRecord(DensityMatrix initial, DensityMatrix final, SubsystemSplit split, GibbsFamily fam_a,
                             GibbsFamily fam_b)
    : initial_(std::move(initial)),
      final_(std::move(final)),
      split_(checked_split(std::move(split), initial_, fam_a, fam_b)),
      fam_a_(std::move(fam_a)),
      fam_b_(std::move(fam_b)),
      ia_(partial_trace(initial_, split_, kKeepA)),
      ib_(partial_trace(initial_, split_, kKeepB)),
      fa_(partial_trace(final_, split_, kKeepA)),
      fb_(partial_trace(final_, split_, kKeepB)) {
    const double ds = entropy(final_) - entropy(initial_);
    if (std::fabs(ds) > 1e-9) {
        throw ValidationError("process: global entropy changed by " + std::to_string(ds));
    }
}

ProcessRecord unitary_process(const DensityMatrix& initial, const Matrix& u, const SubsystemSplit& split,
                              const GibbsFamily& fam_a, const GibbsFamily& fam_b) {
    const Matrix m = u * initial.matrix() * u.adjoint();
    return ProcessRecord(initial, DensityMatrix(0.5 * (m + m.adjoint())), split, fam_a, fam_b);
}

ProcessRecord random_process(const GibbsFamily& fam_a, const GibbsFamily& fam_b, bool thermal_b, Rng& rng) {
    const SubsystemSplit split({fam_a.dim(), fam_b.dim()});
    std::optional<DensityMatrix> initial;
    if (thermal_b) {
        std::uniform_real_distribution<double> beta(0.1, 3.0);
        initial = tensor(random_state(fam_a.dim(), rng), fam_b.state(BetaValue(beta(rng))));
    } else {
        initial = random_state(split.total_dim(), rng);
    }
    return unitary_process(*initial, haar_unitary(split.total_dim(), rng), split, fam_a, fam_b);
}

ProcessRecord random_process(std::size_t dim_a, std::size_t dim_b, bool thermal_b, Rng& rng) {
    const GibbsFamily fa(random_hamiltonian(dim_a, rng));
    const GibbsFamily fb(random_hamiltonian(dim_b, rng));
    return random_process(fa, fb, thermal_b, rng);
}

LedgerEntry work_ledger(const ProcessRecord& p) {
    LedgerEntry l;
    const HermitianOperator& ha = p.fam_a().hamiltonian();
    const HermitianOperator& hb = p.fam_b().hamiltonian();
    l.dE_A = expectation(ha, p.final_a()) - expectation(ha, p.initial_a());
    l.dE_B = expectation(hb, p.final_b()) - expectation(hb, p.initial_b());
    l.dF_A = free_energy_raw(p.final_a(), p.fam_a()) - free_energy_raw(p.initial_a(), p.fam_a());
    l.dF_B = free_energy_raw(p.final_b(), p.fam_b()) - free_energy_raw(p.initial_b(), p.fam_b());
    l.dS_A = entropy(p.final_a()) - entropy(p.initial_a());
    l.dS_B = entropy(p.final_b()) - entropy(p.initial_b());
    l.dI = mutual_information(p.final(), p.split()) - mutual_information(p.initial(), p.split());
    l.W = l.dE_A + l.dE_B;
    l.dQ = l.dE_B - l.dF_B;
    l.dB_A = l.dE_A - l.dF_A;
    l.dW_A = l.W - l.dF_B;
    return l;
}

double heat(const ProcessRecord& p) {
    return bound_energy(p.final_b(), p.fam_b()) - bound_energy(p.initial_b(), p.fam_b());
}

HeatIntegral heat_integral_check(const ProcessRecord& p) {
    const GibbsFamily& fam = p.fam_b();
    const double s0 = entropy(p.initial_b());
    const double s1 = entropy(p.final_b());
    const double ln_g0 = std::log(static_cast<double>(fam.ground_degeneracy()));
    if (fam.ground_degeneracy() > 1 && std::min(s0, s1) < ln_g0 - 1e-12) {
        throw DomainError("heat_integral_check: entropy segment enters the degenerate ground region");
    }
    const double ln_d = std::log(static_cast<double>(fam.dim()));
    const double var0 = fam.evaluate(BetaValue(0.0)).variance;

    HeatIntegral r;
    r.heat = heat(p);
    if (s0 != s1) {
        // s = ln d - u^2 removes the 1/sqrt singularity of T(s) at s = ln d.
        const auto integrand = [&](double u) {
            if (u <= 0.0) return -std::sqrt(2.0 * var0);
            const double s = std::max(ln_d - u * u, 0.0);
            const BetaValue b = fam.intrinsic_beta(s);
            if (!b.is_finite()) return 0.0;
            if (b.value() == 0.0) return -std::sqrt(2.0 * var0);
            return -2.0 * u / b.value();
        };
        const double ua = std::sqrt(std::max(0.0, ln_d - s0));
        const double ub = std::sqrt(std::max(0.0, ln_d - s1));
        // The integrand goes through a root solve, so it is only smooth to
        // ~1e-13 relative; asking for more makes the adaptive split run away.
        r.quadrature = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, ua, ub, 10, 1e-10);
    }
    r.residual = r.quadrature - r.heat;

    if (std::fabs(s1 - s0) > 1e-9) {
        const double t0 = fam.intrinsic_beta(s0).temperature();
        const double t1 = fam.intrinsic_beta(s1).temperature();
        const double ratio = r.heat / (s1 - s0);
        const double slack = 1e-7 / std::fabs(s1 - s0);
        r.mean_value_ordering = ratio >= std::min(t0, t1) - slack && ratio <= std::max(t0, t1) + slack;
    }
    return r;
}

double distance_to_gibbs(const DensityMatrix& rho, const GibbsFamily& fam) {
    const BetaValue b = fam.intrinsic_beta(entropy(rho));
    return max_abs(rho.matrix() - fam.state(b).matrix());
}

HeatBounds heat_bounds_check(const ProcessRecord& p) {
    HeatBounds h;
    h.applicable = distance_to_gibbs(p.initial_b(), p.fam_b()) <= 1e-8;
    const HermitianOperator& hb = p.fam_b().hamiltonian();
    const double ds = entropy(p.final_b()) - entropy(p.initial_b());
    h.heat = heat(p);
    h.upper = expectation(hb, p.final_b()) - expectation(hb, p.initial_b());
    const BetaValue beta = p.fam_b().intrinsic_beta(entropy(p.initial_b()));
    if (beta.value() == 0.0) {
        // T = inf: the lower bound is -inf unless the entropy is unchanged.
        h.lower = ds < -1e-15 ? -std::numeric_limits<double>::infinity() : 0.0;
    } else {
        h.lower = beta.temperature() * ds;
    }
    if (h.applicable) h.holds = h.lower <= h.heat + 1e-9 && h.heat <= h.upper + 1e-9;
    return h;
}

HeatCoincidence heat_coincidence_sweep(const DensityMatrix& rho_a, const GibbsFamily& fam_a,
                                       const DensityMatrix& rho_b, const GibbsFamily& fam_b,
                                       const HermitianOperator& generator, std::span<const double> deltas) {
    const DensityMatrix initial = tensor(rho_a, rho_b);
    if (generator.dim() != initial.dim()) throw ValidationError("heat_coincidence_sweep: generator dimension mismatch");
    const SubsystemSplit split({rho_a.dim(), rho_b.dim()});
    const double t_b = fam_b.intrinsic_beta(entropy(rho_b)).temperature();
    HeatCoincidence out;
    for (double d : deltas) {
        const ProcessRecord p = unitary_process(initial, exp_i(generator, d), split, fam_a, fam_b);
        const LedgerEntry l = work_ledger(p);
        out.deltas.push_back(d);
        out.bound_gap.push_back(std::fabs(l.dQ - t_b * l.dS_B));
        out.energy_gap.push_back(std::fabs(l.dE_B - l.dQ));
    }
    out.bound_slope = fit_slope(out.deltas, out.bound_gap);
    out.energy_slope = fit_slope(out.deltas, out.energy_gap);
    return out;
}

ExtractableWork extractable_work(const DensityMatrix& rho, const GibbsFamily& fam) {
    const BetaValue b = fam.intrinsic_beta(entropy(rho));
    return ExtractableWork{free_energy(rho, fam), fam.state(b)};
}

double bath_assisted_work(const DensityMatrix& rho_a, const GibbsFamily& fam_a, const GibbsFamily& fam_b,
                          double beta_b, double copies) {
    const ThermalPoint bath = fam_b.evaluate(BetaValue(beta_b));
    const double s_total = entropy(rho_a) + copies * bath.entropy;
    const WeightedFamily parts[2] = {{&fam_a, 1.0}, {&fam_b, copies}};
    const JointSolve js = solve_joint_entropy(parts, s_total);
    if (js.degenerate) throw DegenerateError("bath_assisted_work: joint entropy below the ground-space limit");
    const double e_initial = expectation(fam_a.hamiltonian(), rho_a) + copies * bath.energy;
    const double e_final = fam_a.boundary_energy(js.beta) + copies * fam_b.boundary_energy(js.beta);
    return e_initial - e_final;
}

ClausiusCheck clausius_check(const ProcessRecord& p) {
    ClausiusCheck c;
    const BetaValue ba = p.fam_a().intrinsic_beta(entropy(p.initial_a()));
    const BetaValue bb = p.fam_b().intrinsic_beta(entropy(p.initial_b()));
    if (!ba.is_finite() || !bb.is_finite() || ba.value() == 0.0 || bb.value() == 0.0) return c;
    c.supported = true;
    const LedgerEntry l = work_ledger(p);
    const double ta = ba.temperature(), tb = bb.temperature();
    c.lhs = (tb - ta) * l.dS_A;
    c.rhs = l.dF_A + l.dF_B + tb * l.dI - l.W;
    c.holds = c.lhs >= c.rhs - 1e-9;
    return c;
}

KelvinPlanckCheck kelvin_planck_check(const ProcessRecord& p) {
    KelvinPlanckCheck k;
    const LedgerEntry l = work_ledger(p);
    k.balance_residual = (l.dB_A + l.dQ) - (l.W - l.dF_A - l.dF_B);
    const bool thermal = distance_to_gibbs(p.initial_a(), p.fam_a()) <= 1e-8 &&
                         distance_to_gibbs(p.initial_b(), p.fam_b()) <= 1e-8 &&
                         mutual_information(p.initial(), p.split()) <= 1e-10;
    k.corollary_applicable = thermal && l.W < 0.0;
    if (k.corollary_applicable) k.corollary_holds = l.dB_A + l.dQ <= l.W + 1e-9;
    return k;
}

EngineRun carnot_engine(const Bath& cold, const Bath& hot) {
    if (cold.family == nullptr || hot.family == nullptr) throw ValidationError("carnot_engine: missing bath family");
    if (!(cold.copies > 0.0 && hot.copies > 0.0)) throw ValidationError("carnot_engine: copies must be positive");
    if (!std::isfinite(cold.beta) || !std::isfinite(hot.beta)) throw DomainError("carnot_engine: betas must be finite");
    if (cold.beta == hot.beta) throw DegenerateError("carnot_engine: baths at equal temperature draw no heat");
    if (!(cold.beta > hot.beta && hot.beta > 0.0)) {
        throw DomainError("carnot_engine: need beta_cold > beta_hot > 0");
    }
    const ThermalPoint a0 = cold.family->evaluate(BetaValue(cold.beta));
    const ThermalPoint b0 = hot.family->evaluate(BetaValue(hot.beta));
    const WeightedFamily parts[2] = {{cold.family, cold.copies}, {hot.family, hot.copies}};
    const JointSolve js = solve_joint_entropy(parts, cold.copies * a0.entropy + hot.copies * b0.entropy);
    if (js.degenerate || !js.beta.is_finite()) throw DegenerateError("carnot_engine: joint state is degenerate");

    const double de_a = cold.copies * (cold.family->boundary_energy(js.beta) - a0.energy);
    const double de_b = hot.copies * (hot.family->boundary_energy(js.beta) - b0.energy);
    EngineRun run;
    run.beta_joint = js.beta.value();
    run.work = -(de_a + de_b);
    run.heat_drawn = -de_b;
    if (!(run.heat_drawn > 0.0)) throw DegenerateError("carnot_engine: no heat drawn from the hot bath");
    run.efficiency = run.work / run.heat_drawn;
    // Both baths start and end in Gibbs states, so bound-energy changes equal energy changes.
    run.bound_finite = 1.0 - de_a / run.heat_drawn;
    run.bound_carnot = 1.0 - hot.beta / cold.beta;
    return run;
}

ErasureResult erasure(const DensityMatrix& rho_s, const GibbsFamily& fam_s, const DensityMatrix& rho_b,
                      const GibbsFamily& fam_b) {
    if (rho_s.dim() != fam_s.dim() || rho_b.dim() != fam_b.dim()) throw ValidationError("erasure: dimension mismatch");
    if (distance_to_gibbs(rho_b, fam_b) > 1e-8) throw ValidationError("erasure: bath must be a Gibbs state");
    const double s_s = entropy(rho_s);
    const double s_b = entropy(rho_b);
    const double ln_db = std::log(static_cast<double>(fam_b.dim()));
    ErasureResult r;
    r.feasible = s_s <= ln_db - s_b + 1e-12;
    if (!r.feasible) {
        r.work_cost = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const BetaValue beta_new = fam_b.intrinsic_beta(std::min(s_b + s_s, ln_db));
    const DensityMatrix bath_new = fam_b.state(beta_new);
    const DensityMatrix ground = DensityMatrix::pure(fam_s.hamiltonian().eigenvectors().col(0));

    // Free energies against H_S (x) 1 + 1 (x) H_B of the two product states.
    const WeightedFamily parts[2] = {{&fam_s, 1.0}, {&fam_b, 1.0}};
    const auto joint_free = [&](const DensityMatrix& s, const DensityMatrix& b) {
        const double e = expectation(fam_s.hamiltonian(), s) + expectation(fam_b.hamiltonian(), b);
        const JointSolve js = solve_joint_entropy(parts, entropy(s) + entropy(b));
        return e - fam_s.boundary_energy(js.beta) - fam_b.boundary_energy(js.beta);
    };
    r.work_cost = joint_free(ground, bath_new) - joint_free(rho_s, rho_b);
    r.final_bath = bath_new;
    return r;
}

}  // namespace isotherm
