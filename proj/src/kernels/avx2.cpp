// AVX2+FMA kernels. This translation unit is the only one compiled with
// -mavx2 -mfma; nothing here may run before dispatch has checked CPUID.
//
// exp and log are Cephes-style: Cody-Waite range reduction followed by the
// Cephes rational approximations, evaluated four lanes at a time.

#include "isotherm/kernels.hpp"

#if defined(ISOTHERM_HAVE_AVX2)

#include <immintrin.h>

#include <cfloat>
#include <cmath>
#include <cstdint>

namespace isotherm::kernels {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// exp(x) for x in [-708.39, 709]; callers mask anything below.
inline __m256d exp_pd(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125E-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212E-6);
    x = _mm256_max_pd(x, _mm256_set1_pd(-708.39));
    x = _mm256_min_pd(x, _mm256_set1_pd(709.0));

    const __m256d fx = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(fx, c1, x);
    r = _mm256_fnmadd_pd(fx, c2, r);
    const __m256d rr = _mm256_mul_pd(r, r);

    __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
    p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(3.02994407707441961300E-2));
    p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(9.99999999999999999910E-1));
    p = _mm256_mul_pd(p, r);

    __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.52448340349684104192E-3));
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.27265548208155028766E-1));
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.00000000000000000009E0));

    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

    const __m128i n32 = _mm256_cvtpd_epi32(fx);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    n64 = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
    const __m256d pow2n = _mm256_castsi256_pd(_mm256_slli_epi64(n64, 52));
    return _mm256_mul_pd(e, pow2n);
}

// ln(x) for normal positive x.
inline __m256d log_pd(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    // frexp: x = m * 2^e with m in [0.5, 1)
    const __m256i exp_field = _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7ff));
    const __m256i e_int = _mm256_sub_epi64(exp_field, _mm256_set1_epi64x(1022));
    // small int64 -> double via the 2^52+2^51 magic constant
    const __m256d magic = _mm256_set1_pd(6755399441055744.0);
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(e_int, _mm256_castpd_si256(magic))), magic);

    const __m256i mant_bits = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                                              _mm256_set1_epi64x(0x3FE0000000000000LL));
    const __m256d m = _mm256_castsi256_pd(mant_bits);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d small = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
    e = _mm256_sub_pd(e, _mm256_and_pd(small, one));
    const __m256d xr = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(small, m)), one);

    const __m256d z = _mm256_mul_pd(xr, xr);

    __m256d p = _mm256_set1_pd(1.01875663804580931796E-4);
    p = _mm256_fmadd_pd(p, xr, _mm256_set1_pd(4.97494994976747001425E-1));
    p = _mm256_fmadd_pd(p, xr, _mm256_set1_pd(4.70579119878881725854E0));
    p = _mm256_fmadd_pd(p, xr, _mm256_set1_pd(1.44989225341610930846E1));
    p = _mm256_fmadd_pd(p, xr, _mm256_set1_pd(1.79368678507819816313E1));
    p = _mm256_fmadd_pd(p, xr, _mm256_set1_pd(7.70838733755885391666E0));

    __m256d q = _mm256_add_pd(xr, _mm256_set1_pd(1.12873587189167450590E1));
    q = _mm256_fmadd_pd(q, xr, _mm256_set1_pd(4.52279145837532221105E1));
    q = _mm256_fmadd_pd(q, xr, _mm256_set1_pd(8.29875266912776603211E1));
    q = _mm256_fmadd_pd(q, xr, _mm256_set1_pd(7.11544750618563894466E1));
    q = _mm256_fmadd_pd(q, xr, _mm256_set1_pd(2.31251620126765340583E1));

    __m256d y = _mm256_mul_pd(xr, _mm256_div_pd(_mm256_mul_pd(z, p), q));
    y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
    __m256d r = _mm256_add_pd(xr, y);
    r = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
    return r;
}

double exp_weights_avx2(const double* x, std::size_t n, double scale, double ref, double* out) {
    const __m256d vs = _mm256_set1_pd(-scale);
    const __m256d vref = _mm256_set1_pd(ref);
    const __m256d floor = _mm256_set1_pd(-708.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_mul_pd(vs, _mm256_sub_pd(_mm256_loadu_pd(x + i), vref));
        const __m256d keep = _mm256_cmp_pd(a, floor, _CMP_GE_OQ);
        const __m256d w = _mm256_and_pd(keep, exp_pd(a));
        _mm256_storeu_pd(out + i, w);
        acc = _mm256_add_pd(acc, w);
    }
    double sum = hsum(acc);
    for (; i < n; ++i) {
        const double a = -scale * (x[i] - ref);
        const double w = a < -708.0 ? 0.0 : std::exp(a);
        out[i] = w;
        sum += w;
    }
    return sum;
}

Moments moments_avx2(const double* w, const double* x, std::size_t n, double c) {
    const __m256d vc = _mm256_set1_pd(c);
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vw = _mm256_loadu_pd(w + i);
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
        a0 = _mm256_add_pd(a0, vw);
        a1 = _mm256_fmadd_pd(vw, d, a1);
    }
    double s0 = hsum(a0), s1 = hsum(a1);
    const std::size_t tail = i;
    for (; i < n; ++i) {
        s0 += w[i];
        s1 += w[i] * (x[i] - c);
    }
    Moments m;
    m.weight_sum = s0;
    if (s0 <= 0.0) return m;
    m.mean = s1 / s0;

    const __m256d vcm = _mm256_set1_pd(c + m.mean);
    __m256d a2 = _mm256_setzero_pd();
    for (i = 0; i < tail; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vcm);
        a2 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), d), d, a2);
    }
    double s2 = hsum(a2);
    for (i = tail; i < n; ++i) {
        const double d = x[i] - c - m.mean;
        s2 += w[i] * d * d;
    }
    m.variance = s2 / s0;
    return m;
}

double entropy_avx2(const double* p, std::size_t n) {
    const __m256d tiny = _mm256_set1_pd(DBL_MIN);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(p + i);
        const __m256d keep = _mm256_cmp_pd(v, tiny, _CMP_GE_OQ);
        // masked lanes take log(1) = 0
        const __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), v, keep);
        acc = _mm256_fnmadd_pd(_mm256_and_pd(keep, v), log_pd(safe), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        if (p[i] >= DBL_MIN) s -= p[i] * std::log(p[i]);
    }
    return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

constexpr KernelTable kAvx2{Isa::avx2, &exp_weights_avx2, &moments_avx2, &entropy_avx2, &dot_avx2};

}  // namespace

const KernelTable* avx2_table() noexcept { return &kAvx2; }

}  // namespace isotherm::kernels

#else

namespace isotherm::kernels {
const KernelTable* avx2_table() noexcept { return nullptr; }
}  // namespace isotherm::kernels

#endif
