#include "isotherm/charges.hpp"

#include "isotherm/energetics.hpp"
#include "isotherm/error.hpp"
#include "isotherm/kernels.hpp"
#include "isotherm/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace isotherm {
namespace {

constexpr int kRestarts = 32;
constexpr double kSaturation = 1500.0;

double max_abs_vec(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

bool finite_vec(const Eigen::VectorXd& v) { return v.allFinite(); }

// Coefficients of the generic combination used to find the common eigenbasis.
double mixing_coefficient(std::size_t k, int attempt) {
    const double golden = 0.6180339887498949;
    const double x = static_cast<double>(k) * golden + 0.3819660112501051 * static_cast<double>(attempt);
    return 0.5 + (x - std::floor(x));
}

Eigen::VectorXd charge_spreads(const ChargeSet& set) {
    Eigen::VectorXd s(static_cast<Eigen::Index>(set.q()));
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        s(k) = std::max(set.levels().col(k).maxCoeff() - set.levels().col(k).minCoeff(), 1e-12);
    }
    return s;
}

}  // namespace

// ------------------------------------------------------------------ ChargeSet

ChargeSet::ChargeSet(std::vector<HermitianOperator> charges) : charges_(std::move(charges)) {
    if (charges_.empty()) throw ValidationError("ChargeSet: at least the Hamiltonian is required");
    const std::size_t d = charges_.front().dim();
    for (const auto& c : charges_) {
        if (c.dim() != d) throw ValidationError("ChargeSet: charges have different dimensions");
    }
    for (std::size_t j = 0; j < charges_.size(); ++j) {
        for (std::size_t k = j + 1; k < charges_.size(); ++k) {
            const double c = commutator_norm(charges_[j], charges_[k]);
            if (c > kCommutatorTolerance) {
                throw ValidationError("ChargeSet: charges " + std::to_string(j) + " and " + std::to_string(k) +
                                      " do not commute (" + std::to_string(c) + ")");
            }
        }
    }

    const auto n = static_cast<Eigen::Index>(d);
    double scale = 1.0;
    for (const auto& c : charges_) scale = std::max(scale, max_abs(c.matrix()));
    bool ok = false;
    for (int attempt = 0; attempt < 8 && !ok; ++attempt) {
        if (charges_.size() == 1) {
            basis_ = charges_.front().eigenvectors();
        } else {
            Matrix m = Matrix::Zero(n, n);
            for (std::size_t k = 0; k < charges_.size(); ++k) m += mixing_coefficient(k, attempt) * charges_[k].matrix();
            Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
            basis_ = solver.eigenvectors();
        }
        levels_.resize(n, static_cast<Eigen::Index>(charges_.size()));
        ok = true;
        for (std::size_t k = 0; k < charges_.size(); ++k) {
            const Matrix t = basis_.adjoint() * charges_[k].matrix() * basis_;
            const Matrix off = t - Matrix(t.diagonal().asDiagonal());
            if (max_abs(off) > 1e-8 * scale) ok = false;
            levels_.col(static_cast<Eigen::Index>(k)) = t.diagonal().real();
        }
    }
    if (!ok) throw ValidationError("ChargeSet: could not find a common eigenbasis");
}

// ------------------------------------------------------------------ GGEFamily

GGEFamily::GGEFamily(ChargeSet charges) : set_(std::move(charges)) {
    columns_.resize(set_.q());
    for (std::size_t k = 0; k < set_.q(); ++k) {
        const auto col = set_.levels().col(static_cast<Eigen::Index>(k));
        columns_[k].assign(col.data(), col.data() + col.size());
    }
}

double GGEFamily::weights(const Eigen::VectorXd& beta, std::vector<double>& w) const {
    if (static_cast<std::size_t>(beta.size()) != q()) throw ValidationError("GGE: beta vector has wrong length");
    if (!finite_vec(beta)) throw DomainError("GGE: beta vector must be finite");
    const Eigen::VectorXd x = set_.levels() * beta;
    const double ref = x.minCoeff();
    std::vector<double> xs(x.data(), x.data() + x.size());
    w.resize(xs.size());
    kernels::exp_weights(xs, 1.0, ref, w);
    double g = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] == ref) {
            g += 1.0;
        } else {
            tail += w[i];
        }
    }
    return -ref + std::log(g) + std::log1p(tail / g);
}

GGEPoint GGEFamily::evaluate(const Eigen::VectorXd& beta) const {
    std::vector<double> w;
    const double log_z = weights(beta, w);
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;

    GGEPoint pt;
    pt.log_z = log_z;
    const auto nq = static_cast<Eigen::Index>(q());
    pt.L.resize(nq);
    for (Eigen::Index k = 0; k < nq; ++k) pt.L(k) = kernels::dot(w, columns_[static_cast<std::size_t>(k)]);
    // S = sum p (beta.lambda) + ln Z
    pt.S = std::clamp(beta.dot(pt.L) + log_z, 0.0, std::log(static_cast<double>(dim())));
    pt.cov = Eigen::MatrixXd::Zero(nq, nq);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Eigen::VectorXd dev = set_.levels().row(static_cast<Eigen::Index>(i)).transpose() - pt.L;
        pt.cov.noalias() += w[i] * dev * dev.transpose();
    }
    return pt;
}

std::vector<double> GGEFamily::populations(const Eigen::VectorXd& beta) const {
    std::vector<double> w;
    weights(beta, w);
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    return w;
}

DensityMatrix GGEFamily::state(const Eigen::VectorXd& beta) const {
    return DensityMatrix::from_spectrum(set_.basis(), populations(beta));
}

double GGEFamily::log_partition(const Eigen::VectorXd& beta) const {
    std::vector<double> w;
    return weights(beta, w);
}

Eigen::VectorXd GGEFamily::charges_of(const DensityMatrix& rho) const {
    if (rho.dim() != dim()) throw ValidationError("GGE: state dimension mismatch");
    Eigen::VectorXd l(static_cast<Eigen::Index>(q()));
    for (std::size_t k = 0; k < q(); ++k) l(static_cast<Eigen::Index>(k)) = expectation(set_.charge(k), rho);
    return l;
}

DensityMatrix gge_state(const GGEFamily& fam, const Eigen::VectorXd& beta) { return fam.state(beta); }

// ------------------------------------------------------------------ solvers

GGESolve gge_solve(const GGEFamily& fam, const Eigen::VectorXd& target) {
    if (static_cast<std::size_t>(target.size()) != fam.q()) throw ValidationError("gge_solve: target has wrong length");
    const double scale = std::max(1.0, fam.charge_set().levels().cwiseAbs().maxCoeff());
    const Eigen::VectorXd spreads = charge_spreads(fam.charge_set());

    GGESolve best;
    best.residual = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt <= kRestarts; ++attempt) {
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(target.size());
        if (attempt > 0) {
            Rng rng = make_rng(0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(attempt));
            std::normal_distribution<double> normal(0.0, 1.0);
            for (Eigen::Index k = 0; k < beta.size(); ++k) beta(k) = normal(rng) / spreads(k);
        }
        GGEPoint pt = fam.evaluate(beta);
        double r = max_abs_vec(pt.L - target);
        for (int it = 0; it < 200 && r > 1e-14 * scale; ++it) {
            const Eigen::VectorXd step = pt.cov.completeOrthogonalDecomposition().solve(pt.L - target);
            if (!finite_vec(step)) break;
            bool accepted = false;
            for (double lambda = 1.0; lambda > 1e-12; lambda *= 0.5) {
                const Eigen::VectorXd trial = beta + lambda * step;
                if (!finite_vec(trial)) continue;
                const GGEPoint tp = fam.evaluate(trial);
                const double tr = max_abs_vec(tp.L - target);
                if (tr < r) {
                    beta = trial;
                    pt = tp;
                    r = tr;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
        if (r < best.residual) {
            best.beta = beta;
            best.residual = r;
            best.restarts = attempt;
        }
        if (best.residual <= 1e-9 * scale) return best;
    }
    throw DegenerateError("gge_solve: target charges on or outside the attainable region (residual " +
                          std::to_string(best.residual) + ")");
}

double beta_vec_athermality(const DensityMatrix& rho, const GGEFamily& fam, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd l = fam.charges_of(rho);
    return beta.dot(l) - entropy(rho) + fam.log_partition(beta);
}

double absolute_athermality_charges(const DensityMatrix& rho, const GGEFamily& fam) {
    const GGESolve s = gge_solve(fam, fam.charges_of(rho));
    return fam.evaluate(s.beta).S - entropy(rho);
}

double max_entropy_at(const GGEFamily& fam, const Eigen::VectorXd& L, double stop_below) {
    const auto n = L.size();
    const double scale = std::max(1.0, fam.charge_set().levels().cwiseAbs().maxCoeff());
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
    GGEPoint pt = fam.evaluate(beta);
    double phi = beta.dot(L) + pt.log_z;
    double lambda_reg = 0.0;
    for (int it = 0; it < 500; ++it) {
        if (phi < stop_below) return phi;
        const Eigen::VectorXd grad = L - pt.L;
        if (max_abs_vec(grad) <= 1e-14 * scale) break;
        const double tr = std::max(pt.cov.trace(), 1e-300);
        bool moved = false;
        for (int reg = 0; reg < 12 && !moved; ++reg) {
            const double mu = reg == 0 ? lambda_reg : std::max(1e-14 * tr, lambda_reg) * std::pow(10.0, reg);
            const Eigen::MatrixXd h = pt.cov + mu * Eigen::MatrixXd::Identity(n, n);
            Eigen::VectorXd step = -h.completeOrthogonalDecomposition().solve(grad);
            if (!finite_vec(step) || step.norm() == 0.0) step = -grad / tr;
            for (double a = 1.0; a > 1e-12; a *= 0.5) {
                const Eigen::VectorXd trial = beta + a * step;
                const GGEPoint tp = fam.evaluate(trial);
                const double tphi = trial.dot(L) + tp.log_z;
                if (tphi < phi - 1e-4 * a * std::fabs(grad.dot(step)) || (tphi < phi && a < 1e-6)) {
                    beta = trial;
                    pt = tp;
                    phi = tphi;
                    moved = true;
                    break;
                }
            }
            if (moved && reg > 0) lambda_reg = mu * 0.1;
        }
        if (!moved) break;
    }
    return phi;
}

// --------------------------------------------------------------- bound charge

namespace {

// beta_{-k} matching the charges L_i (i != k) with beta_k held fixed:
// minimizes ln Z(beta) + sum_{i != k} beta_i L_i, which is convex.
Eigen::VectorXd solve_rest(const GGEFamily& fam, const Eigen::VectorXd& target, std::size_t k, double beta_k,
                           Eigen::VectorXd beta) {
    const auto q = static_cast<Eigen::Index>(fam.q());
    const auto kk = static_cast<Eigen::Index>(k);
    beta(kk) = beta_k;
    if (q == 1) return beta;
    const double scale = std::max(1.0, fam.charge_set().levels().cwiseAbs().maxCoeff());
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < q; ++i) {
        if (i != kk) idx.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(idx.size());
    const auto objective = [&](const Eigen::VectorXd& b, const GGEPoint& p) {
        double v = p.log_z;
        for (Eigen::Index a = 0; a < m; ++a) v += b(idx[a]) * target(idx[a]);
        return v;
    };
    const auto gradient = [&](const GGEPoint& p) {
        Eigen::VectorXd g(m);
        for (Eigen::Index a = 0; a < m; ++a) g(a) = target(idx[a]) - p.L(idx[a]);
        return g;
    };
    GGEPoint pt = fam.evaluate(beta);
    double obj = objective(beta, pt);
    Eigen::VectorXd grad = gradient(pt);
    for (int it = 0; it < 500; ++it) {
        if (max_abs_vec(grad) <= 1e-14 * scale) break;
        Eigen::MatrixXd hess(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b) hess(a, b) = pt.cov(idx[a], idx[b]);
        Eigen::VectorXd step = -hess.completeOrthogonalDecomposition().solve(grad);
        if (!finite_vec(step)) break;
        bool moved = false;
        for (double a = 1.0; a > 1e-12; a *= 0.5) {
            Eigen::VectorXd trial = beta;
            for (Eigen::Index j = 0; j < m; ++j) trial(idx[j]) += a * step(j);
            const GGEPoint tp = fam.evaluate(trial);
            const double tobj = objective(trial, tp);
            const Eigen::VectorXd tgrad = gradient(tp);
            // near the optimum ln Z is large and the objective is flat to
            // rounding; a smaller gradient is then the better signal
            const double flat = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(obj));
            if (tobj < obj || (tobj <= obj + flat && max_abs_vec(tgrad) < max_abs_vec(grad))) {
                beta = trial;
                pt = tp;
                obj = tobj;
                grad = tgrad;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    Eigen::VectorXd res(m);
    for (Eigen::Index a = 0; a < m; ++a) res(a) = pt.L(idx[a]) - target(idx[a]);
    if (max_abs_vec(res) > 1e-9 * scale) {
        throw DegenerateError("bound_charge: fixed charges are not attainable at this beta_k");
    }
    return beta;
}

// Residual of the q-equation system: L_i - target_i for i != k, S - s_target in slot k.
Eigen::VectorXd system_residual(const GGEPoint& pt, const Eigen::VectorXd& target, double s_target, std::size_t k) {
    Eigen::VectorXd r = pt.L - target;
    r(static_cast<Eigen::Index>(k)) = pt.S - s_target;
    return r;
}

}  // namespace

BoundCharge bound_charge(const DensityMatrix& rho, const GGEFamily& fam, std::size_t k) {
    if (k >= fam.q()) throw ValidationError("bound_charge: charge index out of range");
    const auto kk = static_cast<Eigen::Index>(k);
    const Eigen::VectorXd target = fam.charges_of(rho);
    const double s_target = entropy(rho);
    const double scale = std::max(1.0, fam.charge_set().levels().cwiseAbs().maxCoeff());
    const Eigen::VectorXd spreads = charge_spreads(fam.charge_set());

    BoundCharge out;
    bool solved = false;
    Eigen::VectorXd beta;

    // Newton on the full system, started on the beta_k > 0 side of the max-entropy point.
    try {
        beta = gge_solve(fam, target).beta;
        beta(kk) = std::max(beta(kk), 0.0) + 1.0 / spreads(kk);
        GGEPoint pt = fam.evaluate(beta);
        Eigen::VectorXd res = system_residual(pt, target, s_target, k);
        double r = max_abs_vec(res);
        for (int it = 0; it < 200 && r > 1e-14 * scale; ++it) {
            Eigen::MatrixXd jac = -pt.cov;
            jac.row(kk) = -(pt.cov * beta).transpose();
            const Eigen::VectorXd step = -jac.colPivHouseholderQr().solve(res);
            if (!finite_vec(step)) break;
            bool accepted = false;
            for (double a = 1.0; a > 1e-12; a *= 0.5) {
                const Eigen::VectorXd trial = beta + a * step;
                const GGEPoint tp = fam.evaluate(trial);
                const Eigen::VectorXd tres = system_residual(tp, target, s_target, k);
                if (max_abs_vec(tres) < r) {
                    beta = trial;
                    pt = tp;
                    res = tres;
                    r = max_abs_vec(tres);
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
        solved = r <= 1e-10 * scale && beta(kk) >= -1e-9 / spreads(kk) && finite_vec(beta);
    } catch (const DegenerateError&) {
        solved = false;
    }

    if (!solved) {
        // Nested solve: bisection on beta_k >= 0, inner convex solve for the other betas.
        out.fallback = true;
        Eigen::VectorXd warm = Eigen::VectorXd::Zero(target.size());
        const auto s_of = [&](double bk) {
            warm = solve_rest(fam, target, k, bk, warm);
            return fam.evaluate(warm).S - s_target;
        };
        if (s_of(0.0) < 0.0) throw DegenerateError("bound_charge: entropy exceeds the constrained maximum");
        double lo = 0.0, hi = 1.0 / spreads(kk);
        while (s_of(hi) > 0.0) {
            if (hi * spreads(kk) > kSaturation) {
                // The entropy is below the beta_k -> +inf limit: the infimum sits
                // on a face of the charge polytope and is not a GGE point.
                out.saturated = true;
                break;
            }
            lo = hi;
            hi *= 2.0;
        }
        if (out.saturated) lo = hi;
        for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (s_of(mid) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        warm = solve_rest(fam, target, k, 0.5 * (lo + hi), warm);
        beta = warm;
    }

    out.beta = beta;
    out.tangent = !out.saturated && std::fabs(beta(kk)) * spreads(kk) <= 1e-8;
    const GGEPoint pt = fam.evaluate(beta);
    out.bound = pt.L(kk);
    out.free = target(kk) - out.bound;
    out.gamma = fam.state(beta);
    return out;
}

BoundPotential bound_potential(const DensityMatrix& rho, const GGEFamily& fam, const Eigen::VectorXd& mu,
                               MuNormalization norm) {
    if (static_cast<std::size_t>(mu.size()) != fam.q()) throw ValidationError("bound_potential: mu has wrong length");
    if (!finite_vec(mu) || mu.minCoeff() < 0.0) throw ValidationError("bound_potential: mu entries must be nonnegative");
    Eigen::VectorXd m = mu;
    if (norm == MuNormalization::first_component) {
        if (std::fabs(mu(0) - 1.0) > 1e-12) throw ValidationError("bound_potential: mu_0 must be 1");
        m /= m.norm();
    } else if (std::fabs(mu.norm() - 1.0) > 1e-10) {
        throw ValidationError("bound_potential: mu must have unit Euclidean norm");
    }
    Matrix h = Matrix::Zero(static_cast<Eigen::Index>(fam.dim()), static_cast<Eigen::Index>(fam.dim()));
    for (std::size_t k = 0; k < fam.q(); ++k) h += m(static_cast<Eigen::Index>(k)) * fam.charge_set().charge(k).matrix();
    const GibbsFamily eff{HermitianOperator(h)};
    const double s = entropy(rho);
    const BetaValue beta = eff.intrinsic_beta(s);
    const double v = expectation(eff.hamiltonian(), rho);
    const double b = eff.boundary_energy(beta);
    const double f = v - b;
    return BoundPotential{m, v, b, std::fabs(f) < kFreeEnergySnap ? 0.0 : f, beta, eff.state(beta)};
}

ChargesSecondLaw second_law_charges_check(const ProcessRecord& proc, const GGEFamily& bath, const Eigen::VectorXd& beta) {
    if (bath.dim() != proc.fam_b().dim()) throw ValidationError("second_law_charges_check: bath dimension mismatch");
    if (max_abs(proc.initial_b().matrix() - bath.state(beta).matrix()) > 1e-8) {
        throw ValidationError("second_law_charges_check: initial bath is not the GGE at beta");
    }
    ChargesSecondLaw c;
    const Eigen::VectorXd dl = bath.charges_of(proc.final_b()) - bath.charges_of(proc.initial_b());
    c.weighted_charge_change = beta.dot(dl);
    c.dS_B = entropy(proc.final_b()) - entropy(proc.initial_b());
    c.dS_A = entropy(proc.final_a()) - entropy(proc.initial_a());
    c.bath_form_holds = c.weighted_charge_change >= c.dS_B - 1e-9;
    c.uncorrelated_start = mutual_information(proc.initial(), proc.split()) <= 1e-10;
    c.system_form_holds = c.weighted_charge_change >= -c.dS_A - 1e-9;
    return c;
}

// ------------------------------------------------------------- charges rates

ChargesRateSolution conversion_rate_charges(const DensityMatrix& rho, const DensityMatrix& sigma,
                                            const GGEFamily& fam) {
    const Eigen::VectorXd l_rho = fam.charges_of(rho);
    const Eigen::VectorXd l_sigma = fam.charges_of(sigma);
    const double s_rho = entropy(rho), s_sigma = entropy(sigma);
    const Eigen::VectorXd dl = l_rho - l_sigma;
    const double ds = s_rho - s_sigma;
    const double scale = std::max(1.0, fam.charge_set().levels().cwiseAbs().maxCoeff());

    ChargesRateSolution out;
    const auto finish = [&](double t) {
        out.ray_parameter = t;
        out.phi_L = l_rho + t * dl;
        out.phi_S = out.phi_pure ? 0.0 : s_rho + t * ds;
        out.r = t / (1.0 + t);
        double res = std::fabs(s_rho - (out.r * s_sigma + (1.0 - out.r) * out.phi_S));
        res = std::max(res, max_abs_vec(l_rho - (out.r * l_sigma + (1.0 - out.r) * out.phi_L)));
        out.collinearity_residual = res;
        out.phi_gap = max_entropy_at(fam, out.phi_L) - out.phi_S;
        out.entropy_form = s_sigma != out.phi_S ? (s_rho - out.phi_S) / (s_sigma - out.phi_S)
                                                 : std::numeric_limits<double>::quiet_NaN();
        return out;
    };

    if (max_abs_vec(dl) <= 1e-12 * scale && std::fabs(ds) <= 1e-12) {
        out.coincident = true;
        out.r = 1.0;
        out.phi_L = l_sigma;
        out.phi_S = s_sigma;
        out.entropy_form = 1.0;
        return out;
    }

    const auto inside = [&](double t) {
        const double s = s_rho + t * ds;
        if (s < 0.0) return false;
        return max_entropy_at(fam, l_rho + t * dl, s) >= s;
    };

    if (ds < 0.0) {
        const double t0 = -s_rho / ds;
        if (max_entropy_at(fam, l_rho + t0 * dl, -1e-12) >= -1e-12) {
            out.phi_pure = true;
            out.source_degenerate = t0 == 0.0;
            return finish(t0);
        }
    }

    const double unit = 1.0 / std::max(max_abs_vec(dl) / scale, std::fabs(ds));
    double lo = 0.0, hi = unit;
    if (!inside(0.0)) {
        out.source_degenerate = true;
        return finish(0.0);
    }
    while (inside(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12 * unit) throw DegenerateError("conversion_rate_charges: ray never leaves the region");
    }
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (inside(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double t = 0.5 * (lo + hi);
    out.source_degenerate = t <= 1e-12 * unit;
    return finish(out.source_degenerate ? 0.0 : t);
}

}  // namespace isotherm
