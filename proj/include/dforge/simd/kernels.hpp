#pragma once

#include <cstddef>
#include <string_view>

namespace dforge::simd {

enum class Level { scalar, avx2 };

std::string_view to_string(Level level) noexcept;

// Dense 2-D convolution (cross-correlation) over a pre-padded CHW input.
//   input : [in_channels][padded_height][padded_width]
//   weight: [out_channels][in_channels][kernel][kernel]
//   bias  : [out_channels] or nullptr
//   output: [out_channels][out_height][out_width]
// Every output element accumulates bias first, then taps in
// (in_channel, ky, kx) order.
struct Conv2dArgs {
    const float* input = nullptr;
    int in_channels = 0;
    int padded_height = 0;
    int padded_width = 0;
    const float* weight = nullptr;
    const float* bias = nullptr;
    int out_channels = 0;
    int kernel = 0;
    int stride = 1;
    float* output = nullptr;
    int out_height = 0;
    int out_width = 0;
};

struct KernelTable {
    Level level;
    // y[i] += a * x[i]
    void (*axpy_f32)(float* y, const float* x, float a, std::size_t n);
    void (*axpy_f64)(double* y, const double* x, double a, std::size_t n);
    // x[i] = x[i] < 0 ? x[i] * slope : x[i]
    void (*leaky_relu_f32)(float* x, std::size_t n, float slope);
    // Computes output channels [oc_begin, oc_end).
    void (*conv2d_f32)(const Conv2dArgs& args, int oc_begin, int oc_end);
};

namespace scalar {
extern const KernelTable table;
}

#if defined(DFORGE_ENABLE_AVX2)
namespace avx2 {
extern const KernelTable table;
}
#endif

bool supported(Level level) noexcept;

// Best supported level unless overridden by DFORGE_SIMD=scalar|avx2 or set_level().
Level active_level() noexcept;
void set_level(Level level);

const KernelTable& kernels() noexcept;
const KernelTable& kernels(Level level);

}  // namespace dforge::simd
