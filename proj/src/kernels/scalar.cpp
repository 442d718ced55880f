// Scalar reference kernels. These define the semantics the SIMD variants are
// tested against.

#include "isotherm/kernels.hpp"

#include <cmath>

namespace isotherm::kernels {
namespace {

double exp_weights_scalar(const double* x, std::size_t n, double scale, double ref, double* out) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = -scale * (x[i] - ref);
        const double w = a < -708.0 ? 0.0 : std::exp(a);
        out[i] = w;
        sum += w;
    }
    return sum;
}

Moments moments_scalar(const double* w, const double* x, std::size_t n, double c) {
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s0 += w[i];
        s1 += w[i] * (x[i] - c);
    }
    Moments m;
    m.weight_sum = s0;
    if (s0 <= 0.0) return m;
    m.mean = s1 / s0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - c - m.mean;
        s2 += w[i] * d * d;
    }
    m.variance = s2 / s0;
    return m;
}

double entropy_scalar(const double* p, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
    }
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

constexpr KernelTable kScalar{Isa::scalar, &exp_weights_scalar, &moments_scalar, &entropy_scalar, &dot_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace isotherm::kernels
