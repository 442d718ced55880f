#include "isotherm/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace isotherm::kernels {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const KernelTable* resolve() noexcept {
    const char* env = std::getenv("ISOTHERM_SIMD");
    const KernelTable* simd = cpu_has_avx2() ? avx2_table() : nullptr;
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_table();
        if (std::strcmp(env, "avx2") == 0 && simd != nullptr) return simd;
    }
    return simd != nullptr ? simd : &scalar_table();
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& active() noexcept {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = resolve();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

bool force(Isa isa) noexcept {
    if (isa == Isa::scalar) {
        g_active.store(&scalar_table(), std::memory_order_release);
        return true;
    }
    const KernelTable* simd = cpu_has_avx2() ? avx2_table() : nullptr;
    if (simd == nullptr) return false;
    g_active.store(simd, std::memory_order_release);
    return true;
}

std::string_view name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

}  // namespace isotherm::kernels
