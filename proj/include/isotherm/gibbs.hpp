// gibbs.hpp: Gibbs family of a Hamiltonian, boundary curves and temperature solvers.

#pragma once

#include "isotherm/operators.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace isotherm {

// Inverse temperature. +inf / -inf are the ground / top eigenspace limits.
class BetaValue {
  public:
    constexpr BetaValue() = default;
    constexpr explicit BetaValue(double v) : v_(v) {}
    static constexpr BetaValue plus_infinity() { return BetaValue(std::numeric_limits<double>::infinity()); }
    static constexpr BetaValue minus_infinity() { return BetaValue(-std::numeric_limits<double>::infinity()); }

    constexpr double value() const noexcept { return v_; }
    bool is_finite() const noexcept { return std::isfinite(v_); }
    constexpr bool is_plus_infinity() const noexcept { return v_ == std::numeric_limits<double>::infinity(); }
    constexpr bool is_minus_infinity() const noexcept { return v_ == -std::numeric_limits<double>::infinity(); }
    // T = 1/beta; +0 for +inf, -0 for -inf, +inf at beta = 0.
    double temperature() const noexcept { return v_ == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / v_; }

    friend constexpr bool operator==(BetaValue a, BetaValue b) { return a.v_ == b.v_; }

  private:
    double v_{0.0};
};

// Energy, entropy and log-partition of the Gibbs state at one beta.
struct ThermalPoint {
    double energy{0.0};
    double entropy{0.0};
    double log_z{0.0};      // NaN at the sentinels
    double variance{0.0};   // energy variance; dE/dbeta = -variance
};

class GibbsFamily {
  public:
    explicit GibbsFamily(HermitianOperator hamiltonian);

    const HermitianOperator& hamiltonian() const noexcept { return h_; }
    std::size_t dim() const noexcept { return energies_.size(); }
    // Ascending spectrum, matching hamiltonian().eigenvectors().
    const std::vector<double>& energies() const noexcept { return energies_; }
    double e_min() const noexcept { return energies_.front(); }
    double e_max() const noexcept { return energies_.back(); }
    double width() const noexcept { return e_max() - e_min(); }
    std::size_t ground_degeneracy() const noexcept { return g0_; }
    std::size_t top_degeneracy() const noexcept { return gtop_; }
    // Tolerance used to group levels into the ground/top eigenspaces.
    double level_tolerance() const noexcept { return level_tol_; }
    bool is_flat() const noexcept { return g0_ == dim(); }

    ThermalPoint evaluate(BetaValue beta) const;
    // Occupations of the eigenvectors (ascending energy order).
    std::vector<double> populations(BetaValue beta) const;
    DensityMatrix state(BetaValue beta) const;

    double log_partition(double beta) const;
    double boundary_entropy(BetaValue beta) const { return evaluate(beta).entropy; }
    double boundary_energy(BetaValue beta) const { return evaluate(beta).energy; }

    // beta >= 0 with S(gamma(beta)) = target; +inf when target <= ln g0.
    BetaValue intrinsic_beta(double target_entropy) const;
    // beta in R u {+-inf} with E(gamma(beta)) = target.
    BetaValue spontaneous_beta(double target_energy) const;

  private:
    double shifted_weights(double beta, std::vector<double>& w, double& ref) const;

    HermitianOperator h_;
    std::vector<double> energies_;
    std::size_t g0_{1};
    std::size_t gtop_{1};
    double level_tol_{0.0};
};

// Free functions mirroring the members.
DensityMatrix gibbs_state(const GibbsFamily& fam, BetaValue beta);
double log_partition(const GibbsFamily& fam, double beta);
double boundary_entropy(const GibbsFamily& fam, BetaValue beta);
double boundary_energy(const GibbsFamily& fam, BetaValue beta);
BetaValue intrinsic_beta(const GibbsFamily& fam, double target_entropy);
BetaValue spontaneous_beta(const GibbsFamily& fam, double target_energy);

}  // namespace isotherm
