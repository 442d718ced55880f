#include "cli/commands.hpp"

#include "cli/io.hpp"
#include "isotherm/diagram.hpp"
#include "isotherm/energetics.hpp"
#include "isotherm/equilibrium.hpp"
#include "isotherm/error.hpp"
#include "isotherm/processes.hpp"
#include "isotherm/resource.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>
#include <variant>

namespace isotherm::cli {
namespace {

using ojson = nlohmann::ordered_json;

// Ordered key/value report printed either as aligned text or as JSON. Both
// modes print numbers from the same %.12g string.
class Report {
  public:
    void num(const std::string& key, double v) { items_.push_back({key, format_number(v), true}); }
    void str(const std::string& key, const std::string& v) { items_.push_back({key, v, false}); }
    void flag(const std::string& key, bool v) { items_.push_back({key, v ? "true" : "false", false}); }

    void print_text(std::ostream& out) const {
        for (const auto& it : items_) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%-24s", it.key.c_str());
            out << buf << ' ' << it.value << '\n';
        }
    }
    ojson to_json() const {
        ojson j = ojson::object();
        for (const auto& it : items_) j[it.key] = value_json(it);
        return j;
    }

  private:
    struct Item {
        std::string key;
        std::string value;
        bool numeric;
    };
    static ojson value_json(const Item& it) {
        if (it.value == "true") return true;
        if (it.value == "false") return false;
        if (!it.numeric || it.value == "inf" || it.value == "-inf" || it.value == "nan") return it.value;
        if (it.value.find_first_of(".eE") == std::string::npos) return std::stoll(it.value);
        return std::stod(it.value);
    }
    std::vector<Item> items_;
};

double parse_beta(const std::string& s) {
    if (s == "inf" || s == "+inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || std::isnan(v)) throw ValidationError("beta: cannot parse '" + s + "'");
    return v;
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

void emit(const Report& r, bool json, std::ostream& out) {
    if (json) {
        out << r.to_json().dump(2) << '\n';
    } else {
        r.print_text(out);
    }
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digest(const ProcessRecord& p) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const Matrix* m : {&p.initial().matrix(), &p.final().matrix()}) {
        for (Eigen::Index i = 0; i < m->size(); ++i) {
            h = fnv1a(format_number((*m)(i).real()) + "," + format_number((*m)(i).imag()) + ";", h);
        }
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------- commands

struct InfoOpts {
    std::string system, state;
    bool json = false;
};

int cmd_info(const InfoOpts& o, std::ostream& out) {
    const System sys = load_system(o.system);
    const DensityMatrix rho = load_state(o.state, sys);
    const EnergeticsReport r = analyze(rho, sys.family);
    Report rep;
    rep.num("dim", static_cast<double>(sys.family.dim()));
    rep.num("energy", r.energy);
    rep.num("entropy", r.entropy);
    rep.num("beta_intrinsic", r.intrinsic_beta.value());
    rep.num("beta_spontaneous", r.spontaneous_beta.value());
    rep.num("bound_energy", r.bound_energy);
    rep.num("free_energy", r.free_energy);
    rep.num("athermality", r.athermality);
    emit(rep, o.json, out);
    return kOk;
}

struct BoundaryOpts {
    std::string system;
    std::vector<std::string> states;
    std::string beta_min = "-20", beta_max = "20";
    std::size_t points = kDefaultBoundaryPoints;
    std::string out_path;
};

int cmd_boundary(const BoundaryOpts& o, std::ostream& out) {
    const System sys = load_system(o.system);
    std::vector<LabeledState> states;
    for (const auto& path : o.states) states.push_back({stem(path), load_state(path, sys)});
    const BoundarySample sample = sample_boundary(sys.family, parse_beta(o.beta_min), parse_beta(o.beta_max), o.points);
    if (o.out_path.empty()) {
        write_diagram_csv(out, sample, states, sys.family);
    } else {
        export_diagram(sample, states, sys.family, o.out_path);
    }
    return kOk;
}

struct RateOpts {
    std::string system, from, to;
    bool json = false;
    bool charges = false;
};

int cmd_rate(const RateOpts& o, std::ostream& out) {
    const System sys = load_system(o.system);
    const DensityMatrix rho = load_state(o.from, sys);
    const DensityMatrix sigma = load_state(o.to, sys);
    Report rep;
    if (o.charges) {
        if (!sys.gge) throw ValidationError("charges: system has no extra charges");
        const ChargesRateSolution s = conversion_rate_charges(rho, sigma, *sys.gge);
        rep.num("r", s.r);
        for (Eigen::Index k = 0; k < s.phi_L.size(); ++k) rep.num("phi_L" + std::to_string(k), s.phi_L(k));
        rep.num("phi_S", s.phi_S);
        rep.str("phi_kind", s.coincident ? "coincident"
                            : s.source_degenerate ? "source-degenerate"
                            : s.phi_pure          ? "pure"
                                                  : "thermal");
        rep.num("collinearity_residual", s.collinearity_residual);
    } else {
        const RateSolution s = conversion_rate(rho, sigma, sys.family);
        rep.num("r", s.r);
        rep.num("phi_E", s.phi.E);
        rep.num("phi_S", s.phi.S);
        rep.str("phi_kind", std::string(name(s.phi_kind)));
        if (s.phi_kind == PhiKind::thermal) rep.num("phi_beta", s.phi_beta.value());
        rep.num("collinearity_residual", s.collinearity_residual);
    }
    if (entropy(sigma) > 0.0) rep.num("rate_entropy_only", rate_entropy_only(rho, sigma));
    emit(rep, o.json, out);
    return kOk;
}

struct EquilibrateOpts {
    std::string system, system_a, system_b, state_a, state_b;
    std::string mode = "isoentropic";
    bool json = false;
};

int cmd_equilibrate(const EquilibrateOpts& o, std::ostream& out) {
    const std::string pa = o.system_a.empty() ? o.system : o.system_a;
    const std::string pb = o.system_b.empty() ? o.system : o.system_b;
    if (pa.empty() || pb.empty()) throw ValidationError("system: give --system or both --system-a and --system-b");
    const System sa = load_system(pa);
    const System sb = load_system(pb);
    const Subsystem locals[2] = {{load_state(o.state_a, sa), sa.family}, {load_state(o.state_b, sb), sb.family}};
    EquilibrationOutcome res = [&] {
        if (o.mode == "isoentropic") return equilibrate_isoentropic(locals);
        if (o.mode == "isoenergetic") return equilibrate_isoenergetic(locals);
        throw ValidationError("mode: expected isoentropic or isoenergetic");
    }();
    Report rep;
    rep.str("mode", o.mode);
    rep.num("beta_joint", res.beta_joint.value());
    rep.num("initial_energy", res.initial_energy);
    rep.num("final_energy", res.final_energy);
    rep.num("initial_entropy", res.initial_entropy);
    rep.num("final_entropy", res.final_entropy);
    rep.num("work_released", res.work_released);
    rep.num("entropy_produced", res.entropy_produced);
    rep.flag("degenerate", res.degenerate);
    emit(rep, o.json, out);
    return kOk;
}

struct EngineOpts {
    std::string system, system_cold, system_hot;
    std::string beta_cold, beta_hot;
    std::vector<double> copies{1.0};
    bool json = false;
};

int cmd_engine(const EngineOpts& o, std::ostream& out) {
    const std::string pc = o.system_cold.empty() ? o.system : o.system_cold;
    const std::string ph = o.system_hot.empty() ? o.system : o.system_hot;
    if (pc.empty() || ph.empty()) throw ValidationError("system: give --system or both --system-cold and --system-hot");
    const System sc = load_system(pc);
    const System sh = load_system(ph);
    const double bc = parse_beta(o.beta_cold), bh = parse_beta(o.beta_hot);
    ojson rows = ojson::array();
    std::ostringstream text;
    text << "copies,work,efficiency,bound_finite,bound_carnot,carnot_gap\n";
    for (double n : o.copies) {
        const EngineRun run = carnot_engine({&sc.family, bc, n}, {&sh.family, bh, n});
        const double gap = run.bound_carnot - run.efficiency;
        text << format_number(n) << ',' << format_number(run.work) << ',' << format_number(run.efficiency) << ','
             << format_number(run.bound_finite) << ',' << format_number(run.bound_carnot) << ','
             << format_number(gap) << '\n';
        Report r;
        r.num("copies", n);
        r.num("beta_joint", run.beta_joint);
        r.num("work", run.work);
        r.num("heat_drawn", run.heat_drawn);
        r.num("efficiency", run.efficiency);
        r.num("bound_finite", run.bound_finite);
        r.num("bound_carnot", run.bound_carnot);
        r.num("carnot_gap", gap);
        rows.push_back(r.to_json());
    }
    if (o.json) {
        out << rows.dump(2) << '\n';
    } else {
        out << text.str();
    }
    return kOk;
}

struct LawsOpts {
    std::size_t trials = 1000;
    std::optional<std::uint64_t> seed;
    std::string dims = "2x2";
    unsigned threads = 1;
};

struct TrialOutcome {
    bool ok{true};
    std::string detail;
};

TrialOutcome run_trial(std::size_t da, std::size_t db, std::uint64_t seed, std::size_t t) {
    TrialOutcome res;
    const auto fail = [&](const std::string& law, double a, double b, const ProcessRecord& p) {
        if (!res.ok) return;
        res.ok = false;
        res.detail = "trial=" + std::to_string(t) + " law=" + law + " lhs=" + format_number(a) +
                     " rhs=" + format_number(b) + " digest=" + digest(p);
    };
    try {
        Rng rng = make_rng(seed, t);
        const ProcessRecord p = random_process(da, db, t % 2 == 1, rng);
        const LedgerEntry l = work_ledger(p);
        if (!(std::fabs(l.first_law_residual()) <= 1e-12)) fail("first_law", l.first_law_residual(), 0.0, p);
        if (!(std::fabs(l.dI - (l.dS_A + l.dS_B)) <= 1e-9)) fail("mutual_information", l.dI, l.dS_A + l.dS_B, p);
        const KelvinPlanckCheck kp = kelvin_planck_check(p);
        if (!(std::fabs(kp.balance_residual) <= 1e-10)) fail("kelvin_planck_balance", kp.balance_residual, 0.0, p);
        if (!kp.corollary_holds) fail("kelvin_planck", l.dB_A + l.dQ, l.W, p);
        const ClausiusCheck c = clausius_check(p);
        if (c.supported && !c.holds) fail("clausius", c.lhs, c.rhs, p);

        const HermitianOperator hj = kron_sum(p.fam_a().hamiltonian(), p.fam_b().hamiltonian());
        const GibbsFamily joint(hj);
        const double released = expectation(hj, p.initial()) - expectation(hj, p.final());
        const double bound = free_energy(p.initial(), joint);
        if (!(released <= bound + 1e-9)) fail("work_extraction", released, bound, p);

        const HeatBounds hb = heat_bounds_check(p);
        if (hb.applicable && !hb.holds) fail("heat_bounds", hb.lower, hb.upper, p);
    } catch (const std::exception& e) {
        res.ok = false;
        res.detail = "trial=" + std::to_string(t) + " error=" + e.what();
    }
    return res;
}

int cmd_laws(const LawsOpts& o, std::ostream& out) {
    std::size_t da = 0, db = 0;
    {
        const auto x = o.dims.find('x');
        try {
            if (x == std::string::npos) throw std::invalid_argument("no x");
            std::size_t u1 = 0, u2 = 0;
            da = std::stoul(o.dims.substr(0, x), &u1);
            db = std::stoul(o.dims.substr(x + 1), &u2);
            if (u1 != x || u2 != o.dims.size() - x - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ValidationError("dims: expected AxB, got '" + o.dims + "'");
        }
        if (da < 1 || db < 1 || da * db > 64) throw ValidationError("dims: local dimensions must be >= 1, product <= 64");
    }
    std::uint64_t seed = 1;
    if (o.seed) {
        seed = *o.seed;
    } else if (const char* env = std::getenv("ISOTHERM_SEED")) {
        try {
            seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ValidationError("ISOTHERM_SEED: not an unsigned integer");
        }
    }

    std::vector<TrialOutcome> results(o.trials);
    const unsigned nt = std::max(1u, std::min<unsigned>(o.threads, static_cast<unsigned>(std::max<std::size_t>(1, o.trials))));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t t = w; t < o.trials; t += nt) results[t] = run_trial(da, db, seed, t);
        });
    }
    for (auto& th : pool) th.join();

    std::size_t failures = 0;
    for (const auto& r : results) failures += r.ok ? 0 : 1;
    out << "dims " << da << 'x' << db << '\n';
    out << "seed " << seed << '\n';
    out << "trials " << o.trials << '\n';
    out << "failures " << failures << '\n';
    for (const auto& r : results) {
        if (!r.ok) out << "FAIL " << r.detail << '\n';
    }
    return failures == 0 ? kOk : kLawViolation;
}

struct ChargesOpts {
    std::string system, state;
    std::vector<double> mu;
    bool mu_first = false;
    bool json = false;
};

int cmd_charges(const ChargesOpts& o, std::ostream& out) {
    const System sys = load_system(o.system);
    if (!sys.gge) throw ValidationError("charges: system has no extra charges");
    const GGEFamily& fam = *sys.gge;
    const DensityMatrix rho = load_state(o.state, sys);
    const Eigen::VectorXd l = fam.charges_of(rho);
    Report rep;
    for (Eigen::Index k = 0; k < l.size(); ++k) rep.num("L" + std::to_string(k), l(k));
    rep.num("entropy", entropy(rho));
    const GGESolve gs = gge_solve(fam, l);
    for (Eigen::Index k = 0; k < gs.beta.size(); ++k) rep.num("beta" + std::to_string(k), gs.beta(k));
    rep.num("athermality", fam.evaluate(gs.beta).S - entropy(rho));
    for (std::size_t k = 0; k < fam.q(); ++k) {
        const BoundCharge bc = bound_charge(rho, fam, k);
        rep.num("bound_charge" + std::to_string(k), bc.bound);
        rep.num("free_charge" + std::to_string(k), bc.free);
        rep.flag("bound_charge" + std::to_string(k) + "_flagged", bc.fallback || bc.tangent || bc.saturated);
    }
    if (!o.mu.empty()) {
        Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(o.mu.data(), static_cast<Eigen::Index>(o.mu.size()));
        if (!o.mu_first && mu.norm() > 0.0) mu /= mu.norm();
        const BoundPotential bp =
            bound_potential(rho, fam, mu, o.mu_first ? MuNormalization::first_component : MuNormalization::euclidean);
        rep.num("potential", bp.potential);
        rep.num("bound_potential", bp.bound);
        rep.num("free_potential", bp.free);
        rep.num("beta_potential", bp.beta.value());
    }
    emit(rep, o.json, out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"isotherm: temperature-independent quantum thermodynamics"};
    app.require_subcommand(1);

    InfoOpts info;
    auto* c_info = app.add_subcommand("info", "energetics of one state");
    c_info->add_option("--system", info.system, "system JSON")->required();
    c_info->add_option("--state", info.state, "state JSON")->required();
    c_info->add_flag("--json", info.json, "JSON output");

    BoundaryOpts bnd;
    auto* c_bnd = app.add_subcommand("boundary", "sample the thermal boundary as CSV");
    c_bnd->add_option("--system", bnd.system, "system JSON")->required();
    c_bnd->add_option("--state", bnd.states, "state JSON (repeatable; label = file stem)");
    c_bnd->add_option("--beta-min", bnd.beta_min, "lowest beta (number, inf or -inf)");
    c_bnd->add_option("--beta-max", bnd.beta_max, "highest beta (number, inf or -inf)");
    c_bnd->add_option("--points", bnd.points, "number of boundary points")->check(CLI::Range(3, 1000000));
    c_bnd->add_option("--out", bnd.out_path, "output CSV path (default stdout)");

    RateOpts rate;
    auto* c_rate = app.add_subcommand("rate", "asymptotic conversion rate rho -> sigma");
    c_rate->add_option("--system", rate.system, "system JSON")->required();
    c_rate->add_option("--from", rate.from, "source state JSON")->required();
    c_rate->add_option("--to", rate.to, "target state JSON")->required();
    c_rate->add_flag("--charges", rate.charges, "use all conserved charges of the system");
    c_rate->add_flag("--json", rate.json, "JSON output");

    EquilibrateOpts eq;
    auto* c_eq = app.add_subcommand("equilibrate", "joint equilibration of two systems");
    c_eq->add_option("--system", eq.system, "system JSON shared by A and B");
    c_eq->add_option("--system-a", eq.system_a, "system JSON for A");
    c_eq->add_option("--system-b", eq.system_b, "system JSON for B");
    c_eq->add_option("--state-a", eq.state_a, "state JSON for A")->required();
    c_eq->add_option("--state-b", eq.state_b, "state JSON for B")->required();
    c_eq->add_option("--mode", eq.mode, "isoentropic or isoenergetic");
    c_eq->add_flag("--json", eq.json, "JSON output");

    EngineOpts eng;
    auto* c_eng = app.add_subcommand("engine", "one-shot finite-bath engine");
    c_eng->add_option("--system", eng.system, "system JSON shared by both baths");
    c_eng->add_option("--system-cold", eng.system_cold, "system JSON for the cold bath");
    c_eng->add_option("--system-hot", eng.system_hot, "system JSON for the hot bath");
    c_eng->add_option("--beta-cold", eng.beta_cold, "inverse temperature of the cold bath")->required();
    c_eng->add_option("--beta-hot", eng.beta_hot, "inverse temperature of the hot bath")->required();
    c_eng->add_option("--copies", eng.copies, "bath copies per run (list)")->delimiter(',');
    c_eng->add_flag("--json", eng.json, "JSON output");

    LawsOpts laws;
    std::uint64_t seed_value = 0;
    auto* c_laws = app.add_subcommand("laws", "Monte-Carlo sweep of the first and second laws");
    c_laws->add_option("--trials", laws.trials, "number of random processes");
    auto* seed_opt = c_laws->add_option("--seed", seed_value, "seed (falls back to ISOTHERM_SEED)");
    c_laws->add_option("--dims", laws.dims, "local dimensions AxB");
    c_laws->add_option("--threads", laws.threads, "worker threads")->check(CLI::Range(1u, 1024u));

    ChargesOpts ch;
    auto* c_ch = app.add_subcommand("charges", "multi-charge quantities of one state");
    c_ch->add_option("--system", ch.system, "system JSON with charges")->required();
    c_ch->add_option("--state", ch.state, "state JSON")->required();
    c_ch->add_option("--mu", ch.mu, "potential direction (list)")->delimiter(',');
    c_ch->add_flag("--mu-first-component", ch.mu_first, "mu is normalized by mu_0 = 1");
    c_ch->add_flag("--json", ch.json, "JSON output");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kSchemaError;
    }
    if (*seed_opt) laws.seed = seed_value;

    try {
        if (*c_info) return cmd_info(info, out);
        if (*c_bnd) return cmd_boundary(bnd, out);
        if (*c_rate) return cmd_rate(rate, out);
        if (*c_eq) return cmd_equilibrate(eq, out);
        if (*c_eng) return cmd_engine(eng, out);
        if (*c_laws) return cmd_laws(laws, out);
        if (*c_ch) return cmd_charges(ch, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kSchemaError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kSchemaError;
    }
    return kSchemaError;
}

}  // namespace isotherm::cli
