// Bracketed scalar root finding and 1-D minimization.

#pragma once

#include <functional>

namespace isotherm {

using ScalarFn = std::function<double(double)>;

struct RootResult {
    double x{0.0};
    double fx{0.0};
    int iterations{0};
};

// Brent's method on [a, b]; f(a) and f(b) must not share a sign.
// Stops when the bracket is below xtol (plus a few ulps of x) or |f| <= ftol.
RootResult brent(const ScalarFn& f, double a, double b, double xtol = 0.0, double ftol = 0.0, int max_iter = 200);
// Same with the endpoint values already known.
RootResult brent(const ScalarFn& f, double a, double b, double fa, double fb, double xtol, double ftol, int max_iter);

// Plain bisection; used where an independent path from brent() is wanted.
RootResult bisect(const ScalarFn& f, double a, double b, double xtol = 0.0, int max_iter = 2000);

struct MinResult {
    double x{0.0};
    double fx{0.0};
};

// Golden-section search for a unimodal f on [a, b].
MinResult golden_min(const ScalarFn& f, double a, double b, double xtol = 1e-12, int max_iter = 300);

}  // namespace isotherm
