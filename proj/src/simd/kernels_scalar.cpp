#include <algorithm>

#include "dforge/simd/kernels.hpp"

namespace dforge::simd::scalar {
namespace {

void axpy_f32(float* y, const float* x, float a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy_f64(double* y, const double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void leaky_relu_f32(float* x, std::size_t n, float slope) {
    for (std::size_t i = 0; i < n; ++i) x[i] = x[i] < 0.0f ? x[i] * slope : x[i];
}

// Reference convolution. Tap-major traversal so each output element sees
// exactly bias + sum over (ic, ky, kx) in order.
void conv2d_f32(const Conv2dArgs& p, int oc_begin, int oc_end) {
    const std::size_t out_plane = static_cast<std::size_t>(p.out_height) * p.out_width;
    const std::size_t in_plane = static_cast<std::size_t>(p.padded_height) * p.padded_width;
    const int k = p.kernel;
    for (int oc = oc_begin; oc < oc_end; ++oc) {
        float* out = p.output + oc * out_plane;
        std::fill(out, out + out_plane, p.bias ? p.bias[oc] : 0.0f);
        for (int ic = 0; ic < p.in_channels; ++ic) {
            const float* in = p.input + ic * in_plane;
            const float* w = p.weight + (static_cast<std::size_t>(oc) * p.in_channels + ic) * k * k;
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const float wv = w[ky * k + kx];
                    for (int oy = 0; oy < p.out_height; ++oy) {
                        const float* row = in + static_cast<std::size_t>(oy * p.stride + ky) * p.padded_width + kx;
                        float* orow = out + static_cast<std::size_t>(oy) * p.out_width;
                        if (p.stride == 1) {
                            for (int ox = 0; ox < p.out_width; ++ox) orow[ox] += wv * row[ox];
                        } else {
                            for (int ox = 0; ox < p.out_width; ++ox) orow[ox] += wv * row[ox * p.stride];
                        }
                    }
                }
            }
        }
    }
}

}  // namespace

const KernelTable table{Level::scalar, axpy_f32, axpy_f64, leaky_relu_f32, conv2d_f32};

}  // namespace dforge::simd::scalar
