// energetics.hpp: bound energy, free energy, athermality and their variational forms.

#pragma once

#include "isotherm/gibbs.hpp"

#include <span>
#include <vector>

namespace isotherm {

struct EnergeticsReport {
    double energy{0.0};
    double entropy{0.0};
    double bound_energy{0.0};
    double free_energy{0.0};
    BetaValue intrinsic_beta;
    double athermality{0.0};
    BetaValue spontaneous_beta;
};

// |F| below this is reported as exactly zero.
inline constexpr double kFreeEnergySnap = 1e-12;

// Energy of the Gibbs state with entropy s (E_min when s < ln g0).
double bound_energy_at_entropy(const GibbsFamily& fam, double s);
double bound_energy(const DensityMatrix& rho, const GibbsFamily& fam);
// E - B without the snap to zero; used where exact identities are checked.
double free_energy_raw(const DensityMatrix& rho, const GibbsFamily& fam);
double free_energy(const DensityMatrix& rho, const GibbsFamily& fam);
// |F - T D(rho || gamma(rho))|; requires a finite positive intrinsic beta.
double relative_entropy_check(const DensityMatrix& rho, const GibbsFamily& fam);

// F_beta(rho) - F_beta(gamma(beta)) with F_beta = E - S / beta.
double beta_free_energy(const DensityMatrix& rho, const GibbsFamily& fam, double beta);

double athermality(const DensityMatrix& rho, const GibbsFamily& fam);
// beta E - S + ln Z_beta
double beta_athermality(const DensityMatrix& rho, const GibbsFamily& fam, double beta);

EnergeticsReport analyze(const DensityMatrix& rho, const GibbsFamily& fam);

std::vector<double> log_grid(double lo, double hi, std::size_t n);
// 0 and +-logspace(min_abs, max_abs) with (n-1)/2 points per side; n odd.
std::vector<double> symmetric_log_grid(double min_abs, double max_abs, std::size_t n);

struct VariationalResult {
    double grid_min{0.0};
    double grid_argmin{0.0};
    double grid_step{0.0};     // spacing of the grid cell(s) around grid_argmin
    double refined_min{0.0};   // golden-section refinement inside the neighbouring cells
    double refined_argmin{0.0};
};

// min over beta of beta_free_energy. Empty grid = 2001 log-spaced points on
// [beta(rho)/10, 10 beta(rho)], or [1e-3, 1e3] when beta(rho) is 0 or infinite.
VariationalResult variational_free_energy(const DensityMatrix& rho, const GibbsFamily& fam,
                                          std::span<const double> grid = {});
// min over beta of beta_athermality. Empty grid = symmetric log grid on [-1e3, 1e3].
VariationalResult variational_athermality(const DensityMatrix& rho, const GibbsFamily& fam,
                                          std::span<const double> grid = {});

}  // namespace isotherm
