// diagram.hpp: energy-entropy diagram: boundary sampling, projections, tangents, CSV.

#pragma once

#include "isotherm/gibbs.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace isotherm {

struct DiagramPoint {
    double E{0.0};
    double S{0.0};
};

struct BoundarySample {
    std::vector<double> betas;   // may start/end with +-inf
    std::vector<DiagramPoint> points;
};

inline constexpr std::size_t kDefaultBoundaryPoints = 513;

// Grid uniform in tau = tanh(beta / beta_c), beta_c = 2 / width, so points
// concentrate where the curve bends most. Infinite endpoints map to the
// ground/top eigenspace limits.
BoundarySample sample_boundary(const GibbsFamily& fam, double beta_min, double beta_max,
                               std::size_t n_points = kDefaultBoundaryPoints);

struct Projection {
    DiagramPoint point;
    double free_energy{0.0};      // horizontal distance to the boundary at S(rho)
    double bound_energy{0.0};     // E of the boundary point at S(rho)
    double athermality{0.0};      // vertical distance to the boundary at E(rho)
    BetaValue tangent_beta;       // slope of the boundary at the horizontal foot
    BetaValue spontaneous_beta;   // slope at the vertical foot
};

// Located by bisection along the boundary, independently of the Brent solvers.
Projection project_state(const DensityMatrix& rho, const GibbsFamily& fam);

struct TangentLine {
    double slope{0.0};
    double intercept{0.0};   // S_beta - beta E_beta; equals ln Z_beta
    double at(double e) const noexcept { return intercept + slope * e; }
};
TangentLine tangent_line(const GibbsFamily& fam, double beta);
// Vertical gap between the tangent line of slope beta and the state point.
double tangent_gap(const DensityMatrix& rho, const GibbsFamily& fam, double beta);

struct LabeledState {
    std::string label;
    DensityMatrix state;
};

// %.12g with -0 folded to 0 and infinities spelled inf / -inf.
std::string format_number(double v);

// beta,E,S block; then, when states are given, a blank line and a
// label,E,S,F,B,A,beta_intrinsic,beta_spontaneous block.
void write_diagram_csv(std::ostream& out, const BoundarySample& sample, const std::vector<LabeledState>& states,
                       const GibbsFamily& fam);
std::string diagram_csv(const BoundarySample& sample, const std::vector<LabeledState>& states, const GibbsFamily& fam);
// Throws Error on I/O failure.
void export_diagram(const BoundarySample& sample, const std::vector<LabeledState>& states, const GibbsFamily& fam,
                    const std::string& path);

}  // namespace isotherm
