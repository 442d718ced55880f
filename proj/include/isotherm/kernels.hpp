// kernels.hpp: spectral reduction kernels with scalar and AVX2 variants.
//
// Every Gibbs-family quantity in the library reduces to a handful of loops
// over a spectrum: Boltzmann weights, weighted moments and -sum p ln p.
// Each kernel has a scalar reference implementation and an AVX2+FMA variant;
// the variant is picked once at startup from CPUID and can be forced with
// ISOTHERM_SIMD=scalar|avx2.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace isotherm::kernels {

enum class Isa { scalar, avx2 };

struct Moments {
    double weight_sum{0.0};   // sum w_i
    double mean{0.0};         // sum w_i (x_i - c) / sum w_i
    double variance{0.0};     // sum w_i (x_i - c - mean)^2 / sum w_i
};

// out_i = exp(-scale * (x_i - ref)); returns sum out_i.
// Arguments with scale*(x_i-ref) > 708 underflow to exactly 0.
using ExpWeightsFn = double (*)(const double* x, std::size_t n, double scale, double ref, double* out);
// Moments of x about c, weighted by w (w need not be normalized).
using MomentsFn = Moments (*)(const double* w, const double* x, std::size_t n, double c);
// -sum p_i ln p_i over p_i > 0.
using EntropyFn = double (*)(const double* p, std::size_t n);
using DotFn = double (*)(const double* a, const double* b, std::size_t n);

struct KernelTable {
    Isa isa;
    ExpWeightsFn exp_weights;
    MomentsFn moments;
    EntropyFn entropy;
    DotFn dot;
};

const KernelTable& scalar_table() noexcept;
// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table() noexcept;

bool cpu_has_avx2() noexcept;

// Table used by the library; resolved on first call.
const KernelTable& active() noexcept;
// Test hook: overrides the active table for the rest of the process.
// Returns false when the requested ISA is unavailable.
bool force(Isa isa) noexcept;

std::string_view name(Isa isa) noexcept;

// Convenience wrappers over the active table.
inline double exp_weights(std::span<const double> x, double scale, double ref, std::span<double> out) {
    return active().exp_weights(x.data(), x.size(), scale, ref, out.data());
}
inline Moments moments(std::span<const double> w, std::span<const double> x, double c) {
    return active().moments(w.data(), x.data(), x.size(), c);
}
inline double entropy(std::span<const double> p) { return active().entropy(p.data(), p.size()); }
inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

}  // namespace isotherm::kernels
