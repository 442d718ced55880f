// resource.hpp: asymptotic interconversion rates from energy-entropy geometry.

#pragma once

#include "isotherm/diagram.hpp"

namespace isotherm {

enum class PhiKind { coincident, pure, thermal, source_degenerate };

struct RateSolution {
    double r{0.0};
    DiagramPoint phi;
    PhiKind phi_kind{PhiKind::coincident};
    BetaValue phi_beta;               // boundary slope at phi (thermal kind)
    double ray_parameter{0.0};        // t with x_phi = x_rho + t (x_rho - x_sigma)
    double collinearity_residual{0.0};
    double entropy_form{0.0};         // (S_rho - S_phi) / (S_sigma - S_phi); NaN when undefined
};

// Rate for rho^n -> sigma^m (x) phi^(n-m) with phi on the diagram boundary.
RateSolution conversion_rate(const DensityMatrix& rho, const DensityMatrix& sigma, const GibbsFamily& fam);
RateSolution conversion_rate(const DiagramPoint& x_rho, const DiagramPoint& x_sigma, const GibbsFamily& fam);

// S(rho) / S(sigma), ignoring the Hamiltonian. +inf when both are pure.
double rate_entropy_only(const DensityMatrix& rho, const DensityMatrix& sigma);

std::string_view name(PhiKind k) noexcept;

}  // namespace isotherm
