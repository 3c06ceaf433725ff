#include <atomic>
#include <cstdlib>
#include <string>

#include "dforge/error.hpp"
#include "dforge/simd/kernels.hpp"

namespace dforge::simd {

std::string_view to_string(Level level) noexcept {
    return level == Level::avx2 ? "avx2" : "scalar";
}

bool supported(Level level) noexcept {
    switch (level) {
        case Level::scalar: return true;
        case Level::avx2:
#if defined(DFORGE_ENABLE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

namespace {

Level detect() noexcept {
    if (const char* env = std::getenv("DFORGE_SIMD")) {
        std::string want(env);
        if (want == "scalar") return Level::scalar;
        if (want == "avx2" && supported(Level::avx2)) return Level::avx2;
    }
    return supported(Level::avx2) ? Level::avx2 : Level::scalar;
}

std::atomic<Level>& current() noexcept {
    static std::atomic<Level> level{detect()};
    return level;
}

}  // namespace

Level active_level() noexcept { return current().load(std::memory_order_relaxed); }

void set_level(Level level) {
    if (!supported(level)) {
        throw Error(ErrorCode::invalid_input,
                    "simd level " + std::string(to_string(level)) + " not supported on this cpu");
    }
    current().store(level, std::memory_order_relaxed);
}

const KernelTable& kernels(Level level) {
    if (!supported(level)) {
        throw Error(ErrorCode::invalid_input,
                    "simd level " + std::string(to_string(level)) + " not supported on this cpu");
    }
#if defined(DFORGE_ENABLE_AVX2)
    if (level == Level::avx2) return avx2::table;
#endif
    return scalar::table;
}

const KernelTable& kernels() noexcept {
#if defined(DFORGE_ENABLE_AVX2)
    if (active_level() == Level::avx2) return avx2::table;
#endif
    return scalar::table;
}

}  // namespace dforge::simd
