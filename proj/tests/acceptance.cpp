// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "isotherm/charges.hpp"
#include "isotherm/diagram.hpp"
#include "isotherm/energetics.hpp"
#include "isotherm/equilibrium.hpp"
#include "isotherm/processes.hpp"
#include "isotherm/resource.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace isotherm;
using namespace testing;

namespace {

struct Verdict {
    bool pass{true};
    std::string detail;
};

// Tracks the worst value of a quantity against a limit.
struct Worst {
    double value{0.0};
    void see(double v) { value = std::max(value, std::isnan(v) ? INFINITY : v); }
};

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GibbsFamily qubit() {
    const double h[] = {0.0, 1.0};
    return GibbsFamily(HermitianOperator::diagonal(h));
}

DensityMatrix diag(std::initializer_list<double> p) {
    const std::vector<double> v(p);
    return DensityMatrix::diagonal(v);
}

// ------------------------------------------------------------------ 1
Verdict solver_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    Gen g(1001);
    Worst s_err, b_err;
    for (int t = 0; t < 200; ++t) {
        const std::size_t d = g.integer(2, 16);
        const HermitianOperator h = g.hamiltonian(d);
        const GibbsFamily f(h);
        const auto ev = ref_eigenvalues(h.matrix());
        const double target = g.uniform(0.001, 0.999) * std::log(static_cast<double>(d));
        const BetaValue b = f.intrinsic_beta(target);
        s_err.see(std::fabs(static_cast<double>(ref_gibbs(ev, b.value()).S) - target));

        const double beta = g.beta(0.05, 5.0);
        const double s = static_cast<double>(ref_gibbs(ev, beta).S);
        b_err.see(std::fabs(f.intrinsic_beta(s).value() - beta));
        const double beta_signed = g.beta(0.05, 5.0, true);
        const double e = static_cast<double>(ref_gibbs(ev, beta_signed).E);
        b_err.see(std::fabs(f.spontaneous_beta(e).value() - beta_signed));
    }
    const double secs = seconds_since(t0);
    return {s_err.value <= 1e-10 && b_err.value <= 1e-8 && secs < 5.0,
            "max|dS| " + fmt(s_err.value) + " max|dbeta| " + fmt(b_err.value) + " in " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ 2
Verdict two_level() {
    const GibbsFamily q = qubit();
    const DensityMatrix r = diag({0.1, 0.9});
    // analytic: the CP state is diag(0.9, 0.1), so beta = ln(0.9 / 0.1)
    const double beta_ref = std::log(0.9 / 0.1);
    const double b_ref = 0.1, f_ref = 0.9 - 0.1;
    const double db = std::fabs(q.intrinsic_beta(entropy(r)).value() - beta_ref);
    const double dB = std::fabs(bound_energy(r, q) - b_ref);
    const double dF = std::fabs(free_energy(r, q) - f_ref);
    return {db <= 1e-10 && dB <= 1e-12 && dF <= 1e-12,
            "|dbeta| " + fmt(db) + " |dB| " + fmt(dB) + " |dF| " + fmt(dF)};
}

// ------------------------------------------------------------------ 3
Verdict superadditivity() {
    const auto t0 = std::chrono::steady_clock::now();
    int violations = 0;
    Worst eq_err;
    for (std::size_t da = 2; da <= 4; ++da) {
        for (std::size_t db = 2; db <= 4; ++db) {
            Gen g(1003, da * 10 + db);
            for (int t = 0; t < 1000; ++t) {
                const HermitianOperator ha = g.hamiltonian(da), hb = g.hamiltonian(db);
                const GibbsFamily fa(ha), fb(hb), fj(kron_sum(ha, hb));
                const SubsystemSplit sp({da, db});
                const DensityMatrix r = g.state(da * db);
                const DensityMatrix ra = marginal(r, sp, 0), rb = marginal(r, sp, 1);
                const DensityMatrix prod = tensor(ra, rb);
                const double b_ab = bound_energy(r, fj), b_prod = bound_energy(prod, fj);
                const double b_sum = bound_energy(ra, fa) + bound_energy(rb, fb);
                const double f_ab = free_energy_raw(r, fj), f_prod = free_energy_raw(prod, fj);
                const double f_sum = free_energy_raw(ra, fa) + free_energy_raw(rb, fb);
                violations += b_ab > b_prod + 1e-9;    // P4
                violations += b_prod > b_sum + 1e-9;   // P5
                violations += f_prod > f_ab + 1e-9;    // P6
                violations += f_sum > f_prod + 1e-9;   // P7

                // equality cases: product inputs and equal-beta Gibbs pairs
                eq_err.see(std::fabs(bound_energy(prod, fj) - b_prod));
                const BetaValue beta(g.beta(0.05, 5.0));
                const DensityMatrix ga = fa.state(beta), gb = fb.state(beta);
                eq_err.see(std::fabs(bound_energy(tensor(ga, gb), fj) -
                                     (bound_energy(ga, fa) + bound_energy(gb, fb))));
            }
        }
    }
    const double secs = seconds_since(t0);
    return {violations == 0 && eq_err.value <= 1e-8 && secs < 60.0,
            std::to_string(violations) + " violations in 9x1000 trials, equality gap " + fmt(eq_err.value) + " in " +
                fmt(secs) + " s"};
}

// ------------------------------------------------------------------ 4
Verdict variational() {
    Gen g(1004);
    Worst f_err, a_err, raw_err;
    int argmin_misses = 0, used = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = g.integer(2, 5);
        const GibbsFamily f(g.hamiltonian(d));
        const DensityMatrix r = g.full_rank_state(d);
        const EnergeticsReport rep = analyze(r, f);
        ++used;
        const VariationalResult vf = variational_free_energy(r, f);
        const VariationalResult va = variational_athermality(r, f);
        f_err.see(std::fabs(vf.refined_min - free_energy_raw(r, f)));
        a_err.see(std::fabs(va.refined_min - rep.athermality));
        raw_err.see(std::max(std::fabs(vf.grid_min - free_energy_raw(r, f)), std::fabs(va.grid_min - rep.athermality)));
        argmin_misses += std::fabs(vf.grid_argmin - rep.intrinsic_beta.value()) > vf.grid_step;
        argmin_misses += std::fabs(va.grid_argmin - rep.spontaneous_beta.value()) > va.grid_step;
    }
    return {f_err.value <= 1e-6 && a_err.value <= 1e-6 && argmin_misses == 0,
            "F gap " + fmt(f_err.value) + " A gap " + fmt(a_err.value) + " (unrefined grid " + fmt(raw_err.value) +
                "), argmin misses " +
                std::to_string(argmin_misses) + " over " + std::to_string(used) + " states"};
}

// ------------------------------------------------------------------ 5, 6
struct SweepStats {
    Worst first_law, kp_balance;
    int clausius_violations{0}, clausius_checked{0};
    int extraction_violations{0}, kp_violations{0};
};

const SweepStats& process_sweep() {
    static const SweepStats stats = [] {
        SweepStats s;
        Gen g(1005);
        for (int t = 0; t < 1000; ++t) {
            const ProcessRecord p = random_process(g.integer(2, 4), g.integer(2, 4), t % 2 == 1, g.rng());
            const LedgerEntry l = work_ledger(p);
            s.first_law.see(std::fabs(l.first_law_residual()));
            const KelvinPlanckCheck kp = kelvin_planck_check(p);
            s.kp_balance.see(std::fabs(kp.balance_residual));
            s.kp_violations += !kp.corollary_holds;
            const ClausiusCheck c = clausius_check(p);
            if (c.supported) {
                ++s.clausius_checked;
                s.clausius_violations += c.lhs < c.rhs - 1e-9;
            }
            const HermitianOperator hj = kron_sum(p.fam_a().hamiltonian(), p.fam_b().hamiltonian());
            const GibbsFamily joint(hj);
            const double released = expectation(hj, p.initial()) - expectation(hj, p.final());
            s.extraction_violations += released > free_energy_raw(p.initial(), joint) + 1e-9;
        }
        return s;
    }();
    return stats;
}

Verdict first_law() {
    const SweepStats& s = process_sweep();
    return {s.first_law.value <= 1e-12 && s.kp_balance.value <= 1e-10,
            "first-law residual " + fmt(s.first_law.value) + " balance residual " + fmt(s.kp_balance.value)};
}

Verdict second_laws() {
    const SweepStats& s = process_sweep();
    return {s.clausius_violations == 0 && s.extraction_violations == 0 && s.kp_violations == 0,
            "Clausius " + std::to_string(s.clausius_violations) + "/" + std::to_string(s.clausius_checked) +
                ", work bound " + std::to_string(s.extraction_violations) + "/1000, Kelvin-Planck " +
                std::to_string(s.kp_violations) + "/1000 violations"};
}

// ------------------------------------------------------------------ 7
Verdict heat() {
    Gen g(1007);
    Worst residual;
    int sandwich_violations = 0, thermal = 0;
    for (int t = 0; t < 200; ++t) {
        const GibbsFamily fa(g.hamiltonian(g.integer(2, 3))), fb(g.hamiltonian(g.integer(2, 3)));
        const ProcessRecord p = random_process(fa, fb, t % 4 != 0, g.rng());
        residual.see(std::fabs(heat_integral_check(p).residual));
        const HeatBounds hb = heat_bounds_check(p);
        if (hb.applicable) {
            ++thermal;
            sandwich_violations += !(hb.lower <= hb.heat + 1e-9 && hb.heat <= hb.upper + 1e-9);
        }
    }
    double min_slope = INFINITY;
    std::vector<double> deltas;
    for (int i = 0; i <= 8; ++i) deltas.push_back(std::pow(10.0, -1.0 - 0.25 * i));
    for (int t = 0; t < 10; ++t) {
        const GibbsFamily fa(g.hamiltonian(2)), fb(g.hamiltonian(g.integer(2, 3)));
        const HermitianOperator gen = g.hamiltonian(fa.dim() * fb.dim());
        const HeatCoincidence hc = heat_coincidence_sweep(g.full_rank_state(2), fa,
                                                          fb.state(BetaValue(g.beta(0.2, 2.0))), fb, gen, deltas);
        min_slope = std::min({min_slope, hc.bound_slope, hc.energy_slope});
    }
    return {residual.value <= 1e-7 && sandwich_violations == 0 && thermal > 0 && min_slope >= 1.9,
            "quadrature residual " + fmt(residual.value) + ", sandwich " + std::to_string(sandwich_violations) + "/" +
                std::to_string(thermal) + " violations, min slope " + fmt(min_slope)};
}

// ------------------------------------------------------------------ 8
Verdict equilibration() {
    Gen g(1008);
    int violations = 0;
    for (int t = 0; t < 200; ++t) {
        const GibbsFamily fa(g.hamiltonian(g.integer(2, 4))), fb(g.hamiltonian(g.integer(2, 4)));
        const BetaValue ba(g.beta(0.05, 5.0)), bb(g.beta(0.05, 5.0));
        const Subsystem locals[2] = {{fa.state(ba), fa}, {fb.state(bb), fb}};
        const EquilibrationOutcome s = equilibrate_isoentropic(locals);
        const EquilibrationOutcome e = equilibrate_isoenergetic(locals);
        violations += !lemma3_check(ba, bb, s);
        violations += s.beta_joint.value() < e.beta_joint.value() - 1e-9;
    }
    // oracle: bisection on the per-qubit binary entropy
    const double target = 0.5 * (binary_entropy(0.9) + binary_entropy(0.7));
    const long double beta_ref = ref_bisect(
        [&](long double b) { return binary_entropy(static_cast<double>(1.0L / (1.0L + std::exp(b)))) - target; },
        0.0L, 50.0L);
    const double w_ref = 0.4 - 2.0 * static_cast<double>(1.0L / (1.0L + std::exp(beta_ref)));
    const GibbsFamily q = qubit();
    const Subsystem pair[2] = {{diag({0.9, 0.1}), q}, {diag({0.7, 0.3}), q}};
    const EquilibrationOutcome out = equilibrate_isoentropic(pair);
    const bool oracle_ok = std::fabs(out.beta_joint.value() - static_cast<double>(beta_ref)) < 1e-9 &&
                           std::fabs(out.work_released - w_ref) < 1e-9;
    const bool fixture_ok =
        std::fabs(out.beta_joint.value() - 1.53) <= 0.01 && std::fabs(out.work_released - 0.045) <= 0.001;
    return {violations == 0 && oracle_ok && fixture_ok,
            std::to_string(violations) + " ordering violations; beta_joint " + fmt(out.beta_joint.value()) + " W " +
                fmt(out.work_released) + " (oracle " + fmt(static_cast<double>(beta_ref)) + ", " + fmt(w_ref) + ")"};
}

// ------------------------------------------------------------------ 9
Verdict carnot() {
    const auto t0 = std::chrono::steady_clock::now();
    const GibbsFamily q = qubit();
    const double ba = std::log(9.0), bb = std::log(7.0 / 3.0);
    const EngineRun run = carnot_engine({&q, ba, 1.0}, {&q, bb, 1.0});
    const bool fixture = std::fabs(run.efficiency - 0.36) < 0.01 && run.efficiency < run.bound_carnot &&
                         std::fabs(run.bound_carnot - (1.0 - bb / ba)) < 1e-14 &&
                         std::fabs(run.bound_carnot - 0.614) < 1e-3;
    bool monotone = true;
    double prev = INFINITY;
    for (double n : {1.0, 2.0, 4.0, 8.0}) {
        const EngineRun r = carnot_engine({&q, ba, n}, {&q, bb, n});
        const double gap = r.bound_carnot - r.efficiency;
        monotone = monotone && gap <= prev + 1e-12;
        prev = gap;
    }
    Gen g(1009);
    int violations = 0;
    for (int t = 0; t < 100; ++t) {
        const GibbsFamily fa(g.hamiltonian(g.integer(2, 4))), fb(g.hamiltonian(g.integer(2, 4)));
        const double bc = g.beta(0.5, 5.0);
        const EngineRun r = carnot_engine({&fa, bc, 1.0}, {&fb, bc * g.uniform(0.05, 0.9), 1.0});
        violations += r.efficiency > r.bound_finite + 1e-10;
        violations += r.bound_finite > r.bound_carnot + 1e-10;
    }
    const double secs = seconds_since(t0);
    return {fixture && monotone && violations == 0 && secs < 30.0,
            "eta " + fmt(run.efficiency) + " < Carnot " + fmt(run.bound_carnot) + ", gap monotone " +
                (monotone ? "yes" : "no") + ", " + std::to_string(violations) + " bound violations in " + fmt(secs) +
                " s"};
}

// ------------------------------------------------------------------ 10
Verdict rates() {
    Gen g(1010);
    Worst collinear, pure_err;
    int pure_cases = 0;
    for (int t = 0; t < 300; ++t) {
        const std::size_t d = g.integer(2, 5);
        const GibbsFamily f(g.hamiltonian(d));
        const RateSolution s = conversion_rate(g.state(d), g.full_rank_state(d), f);
        collinear.see(s.collinearity_residual);
        if (s.phi_kind == PhiKind::pure) {
            ++pure_cases;
            pure_err.see(std::fabs(s.r - s.entropy_form));
        }
    }
    // fixture with the 2x2 line intersection as oracle
    const GibbsFamily q = qubit();
    const double th = std::asin(0.5);
    Matrix u(2, 2);
    u << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const double spec[] = {0.9, 0.1};
    const DensityMatrix rho = DensityMatrix::from_spectrum(u, spec);
    const DensityMatrix sigma = DensityMatrix::maximally_mixed(2);
    const double er = expectation(q.hamiltonian(), rho), sr = entropy(rho), es = 0.5, ss = std::log(2.0);
    Eigen::Matrix2d a;
    a << er - es, -1.0, sr - ss, 0.0;
    const Eigen::Vector2d sol = a.colPivHouseholderQr().solve(Eigen::Vector2d(-er, -sr));
    const double r_line = sol(0) / (1.0 + sol(0));
    const RateSolution s = conversion_rate(rho, sigma, q);
    pure_err.see(std::fabs(s.r - sr / ss));
    const bool fixture = std::fabs(s.r - r_line) < 1e-8 && std::fabs(s.r - 0.4691) <= 1e-3;
    return {collinear.value <= 1e-8 && pure_err.value <= 1e-8 && fixture,
            "collinearity " + fmt(collinear.value) + ", pure-case gap " + fmt(pure_err.value) + " over " +
                std::to_string(pure_cases + 1) + " cases, fixture r " + fmt(s.r) + " (line " + fmt(r_line) + ")"};
}

// ------------------------------------------------------------------ 11
Verdict charges() {
    Gen g(1011);
    Worst round_trip, jac, reduction, convexity;
    auto levels = [&](std::size_t d) {
        std::vector<std::vector<double>> lv(2, std::vector<double>(d));
        for (std::size_t i = 0; i < d; ++i) {
            lv[0][i] = static_cast<double>(i) + g.uniform(-0.3, 0.3);
            lv[1][i] = static_cast<double>(g.integer(0, 2));
        }
        return lv;
    };
    auto family = [](const std::vector<std::vector<double>>& lv, const Matrix& u) {
        std::vector<HermitianOperator> ops;
        for (const auto& l : lv) ops.push_back(HermitianOperator(u * HermitianOperator::diagonal(l).matrix() * u.adjoint()));
        return GGEFamily(ChargeSet(std::move(ops)));
    };
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = g.integer(3, 6);
        const GGEFamily f = family(levels(d), haar_unitary(d, g.rng()));
        Eigen::VectorXd b(2);
        b << g.uniform(-2, 2), g.uniform(-2, 2);
        const GGEPoint p = f.evaluate(b);
        const GGESolve s = gge_solve(f, p.L);
        round_trip.see((f.evaluate(s.beta).L - p.L).cwiseAbs().maxCoeff());
        for (int k = 0; k < 2; ++k) {
            Eigen::VectorXd bp = b, bm = b;
            bp(k) += 1e-5;
            bm(k) -= 1e-5;
            jac.see(((f.evaluate(bp).L - f.evaluate(bm).L) / 2e-5 + p.cov.col(k)).cwiseAbs().maxCoeff());
        }
        // zero-entropy convexity on common eigenvectors
        const Matrix& basis = f.charge_set().basis();
        const auto i = static_cast<Eigen::Index>(g.integer(0, d - 1));
        const auto j = (i + 1 + static_cast<Eigen::Index>(g.integer(0, d - 2))) % static_cast<Eigen::Index>(d);
        const double th = g.uniform(0.0, 3.14159), c2 = std::cos(th) * std::cos(th);
        const Eigen::VectorXcd psi = std::cos(th) * basis.col(i) + std::sin(th) * basis.col(j);
        const Eigen::VectorXd mix = c2 * f.charges_of(DensityMatrix::pure(basis.col(i))) +
                                    (1 - c2) * f.charges_of(DensityMatrix::pure(basis.col(j)));
        convexity.see((f.charges_of(DensityMatrix::pure(psi)) - mix).cwiseAbs().maxCoeff());
    }
    for (int t = 0; t < 50; ++t) {
        const std::size_t d = g.integer(2, 5);
        const HermitianOperator h = g.hamiltonian(d);
        const GibbsFamily gf(h);
        const GGEFamily f(ChargeSet({h}));
        const DensityMatrix r = g.full_rank_state(d), s = g.full_rank_state(d);
        Eigen::VectorXd target(1), mu(1);
        target << expectation(h, r);
        mu << 1.0;
        reduction.see(std::fabs(gge_solve(f, target).beta(0) - gf.spontaneous_beta(target(0)).value()));
        reduction.see(std::fabs(absolute_athermality_charges(r, f) - athermality(r, gf)));
        reduction.see(std::fabs(bound_charge(r, f, 0).bound - bound_energy(r, gf)));
        reduction.see(std::fabs(bound_potential(r, f, mu).bound - bound_energy(r, gf)));
        reduction.see(std::fabs(conversion_rate_charges(r, s, f).r - conversion_rate(r, s, gf).r));
    }
    // GGE-bath processes on 4x4 with charge-conserving unitaries
    const std::vector<std::vector<double>> loc{{0, 1, 2, 3}, {0, 1, 1, 2}};
    std::vector<HermitianOperator> bath_ops{HermitianOperator::diagonal(loc[0]), HermitianOperator::diagonal(loc[1])};
    const GGEFamily bath{ChargeSet(bath_ops)};
    std::vector<std::vector<double>> total(2, std::vector<double>(16));
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t x = 0; x < 4; ++x)
            for (std::size_t y = 0; y < 4; ++y) total[k][x * 4 + y] = loc[k][x] + loc[k][y];
    const GibbsFamily fh(bath_ops[0]);
    int law_violations = 0;
    for (int t = 0; t < 500; ++t) {
        Eigen::VectorXd beta(2);
        beta << g.uniform(0.1, 2.0), g.uniform(-1.0, 1.0);
        const DensityMatrix init = tensor(g.state(4), bath.state(beta));
        const ProcessRecord p =
            unitary_process(init, charge_conserving_unitary(total, g.rng()), SubsystemSplit({4, 4}), fh, fh);
        const ChargesSecondLaw c = second_law_charges_check(p, bath, beta);
        law_violations += !c.bath_form_holds;
        law_violations += !(c.uncorrelated_start && c.system_form_holds);
    }
    return {round_trip.value <= 1e-7 && jac.value <= 1e-5 && reduction.value <= 1e-8 && law_violations == 0 &&
                convexity.value <= 1e-10,
            "round trip " + fmt(round_trip.value) + ", Jacobian " + fmt(jac.value) + ", q=1 reductions " +
                fmt(reduction.value) + ", " + std::to_string(law_violations) + " second-law violations, convexity " +
                fmt(convexity.value)};
}

// ------------------------------------------------------------------ 12
std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Verdict cli_determinism() {
    const std::string data = ISOTHERM_TEST_DATA;
    const std::string exe = ISOTHERM_EXE;
    const auto tmp = std::filesystem::temp_directory_path() / ("isotherm_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(tmp);
    const std::string sys = data + "/fixtures/qubit.json";
    const std::string info_cmd = "\"" + exe + "\" info --system \"" + sys + "\" --state \"" + data +
                                 "/fixtures/rho.json\" --json > ";
    const std::string csv_cmd = "\"" + exe + "\" boundary --system \"" + sys + "\" --state \"" + data +
                                "/fixtures/rho.json\" --state \"" + data + "/fixtures/thermal.json\" --out ";
    bool ok = true;
    std::string why;
    for (int run = 0; run < 2; ++run) {
        const std::string info_out = (tmp / ("info" + std::to_string(run) + ".json")).string();
        const std::string csv_out = (tmp / ("diagram" + std::to_string(run) + ".csv")).string();
        if (std::system((info_cmd + "\"" + info_out + "\"").c_str()) != 0 ||
            std::system((csv_cmd + "\"" + csv_out + "\"").c_str()) != 0) {
            ok = false;
            why = "command failed";
            continue;
        }
        if (slurp(info_out) != slurp(data + "/golden/info_rho.json")) {
            ok = false;
            why += " info run " + std::to_string(run) + " differs;";
        }
        if (slurp(csv_out) != slurp(data + "/golden/qubit_diagram.csv")) {
            ok = false;
            why += " diagram run " + std::to_string(run) + " differs;";
        }
    }
    std::filesystem::remove_all(tmp);
    return {ok, ok ? "two runs byte-identical to the golden info JSON and diagram CSV" : why};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Verdict (*fn)();
    };
    const Criterion all[] = {
        {"solver correctness", solver_correctness},
        {"two-level closed forms", two_level},
        {"bound/free energy superadditivity", superadditivity},
        {"variational forms", variational},
        {"first law and balance", first_law},
        {"Clausius and work bound", second_laws},
        {"heat definitions", heat},
        {"equilibration ordering", equilibration},
        {"finite-bath Carnot", carnot},
        {"conversion rates", rates},
        {"multiple charges", charges},
        {"CLI determinism", cli_determinism},
    };
    int failed = 0, index = 0;
    for (const auto& c : all) {
        ++index;
        Verdict v;
        try {
            v = c.fn();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s %2d %-34s %s\n", v.pass ? "PASS" : "FAIL", index, c.name, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
