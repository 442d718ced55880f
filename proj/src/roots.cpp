#include "isotherm/roots.hpp"

#include "isotherm/error.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace isotherm {
namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool same_sign(double a, double b) { return (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0); }
}  // namespace

RootResult brent(const ScalarFn& f, double a, double b, double xtol, double ftol, int max_iter) {
    return brent(f, a, b, f(a), f(b), xtol, ftol, max_iter);
}

RootResult brent(const ScalarFn& f, double a, double b, double fa, double fb, double xtol, double ftol,
                 int max_iter) {
    if (std::isnan(fa) || std::isnan(fb)) throw DomainError("brent: NaN at bracket endpoint");
    if (same_sign(fa, fb)) throw DomainError("brent: root is not bracketed");
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};

    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 1; it <= max_iter; ++it) {
        if (same_sign(fb, fc)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * kEps * std::fabs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::fabs(m) <= tol || fb == 0.0 || std::fabs(fb) <= ftol) return {b, fb, it};

        if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if (std::isnan(fb)) throw DomainError("brent: NaN inside bracket");
    }
    return {b, fb, max_iter};
}

RootResult bisect(const ScalarFn& f, double a, double b, double xtol, int max_iter) {
    double fa = f(a);
    const double fb = f(b);
    if (same_sign(fa, fb)) throw DomainError("bisect: root is not bracketed");
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    double fm = fb;
    double mid = b;
    for (int it = 1; it <= max_iter; ++it) {
        mid = 0.5 * (a + b);
        if (mid == a || mid == b || std::fabs(b - a) <= xtol) return {mid, f(mid), it};
        fm = f(mid);
        if (fm == 0.0) return {mid, fm, it};
        if (same_sign(fm, fa)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return {mid, fm, max_iter};
}

MinResult golden_min(const ScalarFn& f, double a, double b, double xtol, int max_iter) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    if (a > b) std::swap(a, b);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > xtol + 2.0 * kEps * std::fabs(c); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? MinResult{c, fc} : MinResult{d, fd};
}

}  // namespace isotherm
