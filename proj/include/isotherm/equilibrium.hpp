// equilibrium.hpp: mutual equilibrium of non-interacting subsystems.

#pragma once

#include "isotherm/gibbs.hpp"

#include <span>
#include <vector>

namespace isotherm {

struct Subsystem {
    DensityMatrix state;
    GibbsFamily family;
};

// A Gibbs family taken `copies` times (n-fold tensor power of the same system).
struct WeightedFamily {
    const GibbsFamily* family{nullptr};
    double copies{1.0};
};

struct JointSolve {
    BetaValue beta;
    // Set when the target lies below what the family can reach at the limit
    // (entropy below sum of n ln g0); beta is then the +inf sentinel.
    bool degenerate{false};
};

// beta >= 0 with sum n_X S_X(beta) = total_entropy.
JointSolve solve_joint_entropy(std::span<const WeightedFamily> parts, double total_entropy);
// beta in R u {+-inf} with sum n_X E_X(beta) = total_energy.
BetaValue solve_joint_energy(std::span<const WeightedFamily> parts, double total_energy);

enum class EquilibrationMode { isoentropic, isoenergetic };

struct EquilibrationOutcome {
    EquilibrationMode mode{EquilibrationMode::isoentropic};
    BetaValue beta_joint;
    std::vector<DensityMatrix> final_locals;
    double initial_energy{0.0};
    double final_energy{0.0};
    double initial_entropy{0.0};
    double final_entropy{0.0};
    double work_released{0.0};      // E_initial - E_final
    double entropy_produced{0.0};   // S_final - S_initial
    bool degenerate{false};

    DensityMatrix final_state() const;
};

struct EquilibriumVerdict {
    bool equilibrium{false};
    double free_energy{0.0};
};

// F(rho_joint) <= 1e-8 against the Kronecker-sum Hamiltonian of the parts.
EquilibriumVerdict is_equilibrium(const DensityMatrix& rho_joint, std::span<const GibbsFamily> fams,
                                  const SubsystemSplit& split);

EquilibrationOutcome equilibrate_isoentropic(std::span<const Subsystem> locals);
// Correlated input: the conserved entropy is S(rho_joint), not the sum of marginals.
EquilibrationOutcome equilibrate_isoentropic(const DensityMatrix& rho_joint, std::span<const GibbsFamily> fams,
                                             const SubsystemSplit& split);
EquilibrationOutcome equilibrate_isoenergetic(std::span<const Subsystem> locals);

// min(bA, bB) - 1e-9 <= beta_joint <= max(bA, bB) + 1e-9
bool lemma3_check(BetaValue beta_a, BetaValue beta_b, const EquilibrationOutcome& outcome);

}  // namespace isotherm
