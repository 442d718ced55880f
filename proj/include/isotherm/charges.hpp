// charges.hpp: commuting conserved charges and generalized Gibbs ensembles.

#pragma once

#include "isotherm/gibbs.hpp"
#include "isotherm/processes.hpp"

#include <optional>
#include <vector>

namespace isotherm {

inline constexpr double kCommutatorTolerance = 1e-10;

// L_0 = H followed by further charges, all pairwise commuting.
class ChargeSet {
  public:
    explicit ChargeSet(std::vector<HermitianOperator> charges);

    std::size_t q() const noexcept { return charges_.size(); }
    std::size_t dim() const noexcept { return charges_.front().dim(); }
    const std::vector<HermitianOperator>& charges() const noexcept { return charges_; }
    const HermitianOperator& charge(std::size_t k) const { return charges_.at(k); }
    // Common orthonormal eigenbasis (columns) and eigenvalues levels(i, k) of L_k on column i.
    const Matrix& basis() const noexcept { return basis_; }
    const Eigen::MatrixXd& levels() const noexcept { return levels_; }

  private:
    std::vector<HermitianOperator> charges_;
    Matrix basis_;
    Eigen::MatrixXd levels_;
};

struct GGEPoint {
    Eigen::VectorXd L;     // <L_k>
    double S{0.0};
    double log_z{0.0};
    Eigen::MatrixXd cov;   // Cov(L_j, L_k); dL_j/dbeta_k = -cov(j, k)
};

class GGEFamily {
  public:
    explicit GGEFamily(ChargeSet charges);

    const ChargeSet& charge_set() const noexcept { return set_; }
    std::size_t q() const noexcept { return set_.q(); }
    std::size_t dim() const noexcept { return set_.dim(); }

    GGEPoint evaluate(const Eigen::VectorXd& beta) const;
    std::vector<double> populations(const Eigen::VectorXd& beta) const;
    DensityMatrix state(const Eigen::VectorXd& beta) const;
    double log_partition(const Eigen::VectorXd& beta) const;
    // (L_0(rho), ..., L_{q-1}(rho))
    Eigen::VectorXd charges_of(const DensityMatrix& rho) const;

  private:
    double weights(const Eigen::VectorXd& beta, std::vector<double>& w) const;

    ChargeSet set_;
    std::vector<std::vector<double>> columns_;   // columns_[k][i] = levels(i, k)
};

DensityMatrix gge_state(const GGEFamily& fam, const Eigen::VectorXd& beta);

struct GGESolve {
    Eigen::VectorXd beta;
    double residual{0.0};   // max_k |L_k(gamma) - target_k|
    int restarts{0};
};
// beta with <L_k>_gamma(beta) = target_k. Throws DegenerateError for targets on
// or outside the boundary of the attainable region.
GGESolve gge_solve(const GGEFamily& fam, const Eigen::VectorXd& target);

// sum beta_k L_k(rho) - S(rho) + ln Z_beta
double beta_vec_athermality(const DensityMatrix& rho, const GGEFamily& fam, const Eigen::VectorXd& beta);
// S(gamma) - S(rho) with gamma the GGE matching every charge of rho.
double absolute_athermality_charges(const DensityMatrix& rho, const GGEFamily& fam);

struct BoundCharge {
    double bound{0.0};          // B_k
    double free{0.0};           // L_k(rho) - B_k
    Eigen::VectorXd beta;
    std::optional<DensityMatrix> gamma;
    bool fallback{false};       // Newton certificate failed; nested solve used
    bool tangent{false};        // constraint line touches the boundary; minimizer not unique
    bool saturated{false};      // entropy below the beta_k -> +inf limit; bound is the polytope-face value
};
BoundCharge bound_charge(const DensityMatrix& rho, const GGEFamily& fam, std::size_t k);

enum class MuNormalization { euclidean, first_component };

struct BoundPotential {
    Eigen::VectorXd mu;    // Euclidean-normalized direction actually used
    double potential{0.0}; // V_mu(rho)
    double bound{0.0};     // B_mu
    double free{0.0};      // V_mu(rho) - B_mu
    BetaValue beta;        // gamma_mu = exp(-beta H~) / Z
    DensityMatrix gamma;
};
// H~ = sum mu_k L_k. With first_component, mu_0 must be 1 and mu is rescaled to unit length.
BoundPotential bound_potential(const DensityMatrix& rho, const GGEFamily& fam, const Eigen::VectorXd& mu,
                               MuNormalization norm = MuNormalization::euclidean);

struct ChargesSecondLaw {
    double weighted_charge_change{0.0};   // sum beta_k dL_k^B
    double dS_B{0.0};
    double dS_A{0.0};
    bool bath_form_holds{false};     // sum beta_k dL_k^B >= dS_B
    bool uncorrelated_start{false};  // I(A:B) = 0 initially, so dI >= 0
    bool system_form_holds{false};   // sum beta_k dL_k^B >= -dS_A
};
// bath_charges acts on B; its L_0 must match proc.fam_b(). Throws ValidationError
// unless rho_B = gamma_B(beta) within 1e-8.
ChargesSecondLaw second_law_charges_check(const ProcessRecord& proc, const GGEFamily& bath_charges,
                                          const Eigen::VectorXd& beta);

struct ChargesRateSolution {
    double r{0.0};
    Eigen::VectorXd phi_L;
    double phi_S{0.0};
    bool phi_pure{false};
    bool source_degenerate{false};
    bool coincident{false};
    double ray_parameter{0.0};
    double collinearity_residual{0.0};
    double phi_gap{0.0};        // max-entropy at phi_L minus phi_S (0 on the thermal boundary)
    double entropy_form{0.0};
};
// Half-line from x_sigma through x_rho, intersected with the boundary of the
// charges-entropy region by bisection on a convex-dual membership test.
ChargesRateSolution conversion_rate_charges(const DensityMatrix& rho, const DensityMatrix& sigma,
                                            const GGEFamily& fam);

// max entropy at charge vector L: inf_beta [beta.L + ln Z(beta)], computed by
// damped Newton on the convex dual; -inf (or a value below stop_below) when L is unattainable.
double max_entropy_at(const GGEFamily& fam, const Eigen::VectorXd& L, double stop_below = -1e300);

}  // namespace isotherm
