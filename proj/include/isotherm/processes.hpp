// processes.hpp: heat, work, the first and second laws, engines and erasure.

#pragma once

#include "isotherm/equilibrium.hpp"
#include "isotherm/random.hpp"

#include <optional>
#include <vector>

namespace isotherm {

// rho_AB -> rho'_AB on a bipartite split, A = system, B = environment.
class ProcessRecord {
  public:
    // Throws ValidationError unless |S(final) - S(initial)| <= 1e-9.
    ProcessRecord(DensityMatrix initial, DensityMatrix final, SubsystemSplit split, GibbsFamily fam_a,
                  GibbsFamily fam_b);

    const DensityMatrix& initial() const noexcept { return initial_; }
    const DensityMatrix& final() const noexcept { return final_; }
    const SubsystemSplit& split() const noexcept { return split_; }
    const GibbsFamily& fam_a() const noexcept { return fam_a_; }
    const GibbsFamily& fam_b() const noexcept { return fam_b_; }
    const DensityMatrix& initial_a() const noexcept { return ia_; }
    const DensityMatrix& initial_b() const noexcept { return ib_; }
    const DensityMatrix& final_a() const noexcept { return fa_; }
    const DensityMatrix& final_b() const noexcept { return fb_; }

  private:
    DensityMatrix initial_, final_;
    SubsystemSplit split_;
    GibbsFamily fam_a_, fam_b_;
    DensityMatrix ia_, ib_, fa_, fb_;
};

// rho -> U rho U^dagger
ProcessRecord unitary_process(const DensityMatrix& initial, const Matrix& u, const SubsystemSplit& split,
                              const GibbsFamily& fam_a, const GibbsFamily& fam_b);
// Random initial state (Hilbert-Schmidt, or rho_A (x) gamma_B at a random beta
// when thermal_b) followed by a Haar-random global unitary.
ProcessRecord random_process(const GibbsFamily& fam_a, const GibbsFamily& fam_b, bool thermal_b, Rng& rng);
// Same with GUE Hamiltonians of the given local dimensions.
ProcessRecord random_process(std::size_t dim_a, std::size_t dim_b, bool thermal_b, Rng& rng);

struct LedgerEntry {
    double dQ{0.0};     // bound-energy change of B
    double W{0.0};      // dE_A + dE_B
    double dW_A{0.0};   // W - dF_B
    double dE_A{0.0}, dE_B{0.0};
    double dF_A{0.0}, dF_B{0.0};
    double dS_A{0.0}, dS_B{0.0};
    double dI{0.0};
    double dB_A{0.0};   // bound-energy change of A

    double first_law_residual() const noexcept { return dE_A - (dW_A - dQ); }
};

LedgerEntry work_ledger(const ProcessRecord& proc);
double heat(const ProcessRecord& proc);

struct HeatIntegral {
    double quadrature{0.0};   // integral of T(s) ds from S_B to S'_B
    double heat{0.0};
    double residual{0.0};     // quadrature - heat
    bool mean_value_ordering{true};   // dQ/dS_B lies between the endpoint temperatures
};
// Throws DomainError when the entropy segment enters the degenerate region below ln g0.
HeatIntegral heat_integral_check(const ProcessRecord& proc);

struct HeatBounds {
    bool applicable{false};   // initial rho_B is Gibbs within 1e-8
    double lower{0.0};        // T_B dS_B
    double heat{0.0};
    double upper{0.0};        // dE_B
    bool holds{false};
};
HeatBounds heat_bounds_check(const ProcessRecord& proc);

struct HeatCoincidence {
    std::vector<double> deltas;
    std::vector<double> bound_gap;    // |dQ - T dS_B|
    std::vector<double> energy_gap;   // |dE_B - dQ|
    double bound_slope{0.0};          // least-squares slope of log gap vs log delta
    double energy_slope{0.0};
};
// Applies exp(-i delta G) to rho_A (x) rho_B for each delta and fits the
// scaling of the differences between the three heat definitions.
HeatCoincidence heat_coincidence_sweep(const DensityMatrix& rho_a, const GibbsFamily& fam_a,
                                       const DensityMatrix& rho_b, const GibbsFamily& fam_b,
                                       const HermitianOperator& generator, std::span<const double> deltas);

struct ExtractableWork {
    double work{0.0};
    DensityMatrix witness;
};
ExtractableWork extractable_work(const DensityMatrix& rho, const GibbsFamily& fam);

// Work released by iso-entropic equilibration of rho_A with n copies of
// gamma_B(beta_b). Tends to F_{T_B}(rho_A) - F_{T_B}(gamma_A(T_B)) as n grows.
double bath_assisted_work(const DensityMatrix& rho_a, const GibbsFamily& fam_a, const GibbsFamily& fam_b,
                          double beta_b, double copies);

struct ClausiusCheck {
    bool supported{false};   // both initial intrinsic temperatures finite and nonzero
    double lhs{0.0};         // (T_B - T_A) dS_A
    double rhs{0.0};         // dF_A + dF_B + T_B dI - W
    bool holds{false};
};
ClausiusCheck clausius_check(const ProcessRecord& proc);

struct KelvinPlanckCheck {
    double balance_residual{0.0};   // dQ_A + dQ_B - (W - dF_A - dF_B)
    bool corollary_applicable{false};
    bool corollary_holds{true};     // dQ_A + dQ_B <= W < 0
};
KelvinPlanckCheck kelvin_planck_check(const ProcessRecord& proc);

struct Bath {
    const GibbsFamily* family{nullptr};
    double beta{0.0};
    double copies{1.0};
};

struct EngineRun {
    double beta_joint{0.0};
    double work{0.0};           // -dE_total
    double heat_drawn{0.0};     // -dE_B
    double efficiency{0.0};
    double bound_finite{0.0};   // 1 - dB_A / (-dB_B)
    double bound_carnot{0.0};   // 1 - T_A / T_B
};
// A cold (beta_a), B hot (beta_b). Throws DomainError unless beta_a > beta_b > 0
// and DegenerateError when the run draws no heat from B.
EngineRun carnot_engine(const Bath& cold, const Bath& hot);

struct ErasureResult {
    bool feasible{false};
    double work_cost{0.0};                 // NaN when infeasible
    std::optional<DensityMatrix> final_bath;
};
// Reset rho_S to the ground state of fam_S using a Gibbs bath rho_B.
ErasureResult erasure(const DensityMatrix& rho_s, const GibbsFamily& fam_s, const DensityMatrix& rho_b,
                      const GibbsFamily& fam_b);

// Max-abs distance from rho to the Gibbs state at its own intrinsic beta.
double distance_to_gibbs(const DensityMatrix& rho, const GibbsFamily& fam);

}  // namespace isotherm
