#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dforge/simd/kernels.hpp"

namespace dforge::simd::avx2 {
namespace {

void axpy_f32(float* y, const float* x, float a, std::size_t n) {
    const __m256 va = _mm256_set1_ps(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
    }
    for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void axpy_f64(double* y, const double* x, double a, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void leaky_relu_f32(float* x, std::size_t n, float slope) {
    const __m256 vs = _mm256_set1_ps(slope);
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 v = _mm256_loadu_ps(x + i);
        __m256 neg = _mm256_cmp_ps(v, zero, _CMP_LT_OQ);
        _mm256_storeu_ps(x + i, _mm256_blendv_ps(v, _mm256_mul_ps(v, vs), neg));
    }
    for (; i < n; ++i) x[i] = x[i] < 0.0f ? x[i] * slope : x[i];
}

constexpr int oc_block = 4;

// Register tile: 4 output channels x 16 output columns (8 accumulators).
void conv2d_f32(const Conv2dArgs& p, int oc_begin, int oc_end) {
    if (p.stride != 1) {
        scalar::table.conv2d_f32(p, oc_begin, oc_end);
        return;
    }
    const int k = p.kernel;
    const int taps = p.in_channels * k * k;
    const int ow = p.out_width;
    const std::size_t out_plane = static_cast<std::size_t>(p.out_height) * ow;
    const std::size_t in_plane = static_cast<std::size_t>(p.padded_height) * p.padded_width;
    std::vector<float> packed(static_cast<std::size_t>(taps) * oc_block);

    for (int ob = oc_begin; ob < oc_end; ob += oc_block) {
        const int nb = std::min(oc_block, oc_end - ob);
        for (int t = 0; t < taps; ++t) {
            for (int j = 0; j < oc_block; ++j) {
                packed[t * oc_block + j] =
                    j < nb ? p.weight[static_cast<std::size_t>(ob + j) * taps + t] : 0.0f;
            }
        }
        float bias[oc_block] = {};
        for (int j = 0; j < nb; ++j) bias[j] = p.bias ? p.bias[ob + j] : 0.0f;

        for (int oy = 0; oy < p.out_height; ++oy) {
            int ox = 0;
            for (; ox + 16 <= ow; ox += 16) {
                __m256 acc[oc_block][2];
                for (int j = 0; j < oc_block; ++j) acc[j][0] = acc[j][1] = _mm256_set1_ps(bias[j]);
                const float* wp = packed.data();
                for (int ic = 0; ic < p.in_channels; ++ic) {
                    const float* plane = p.input + ic * in_plane;
                    for (int ky = 0; ky < k; ++ky) {
                        const float* row = plane + static_cast<std::size_t>(oy + ky) * p.padded_width + ox;
                        for (int kx = 0; kx < k; ++kx, wp += oc_block) {
                            const __m256 v0 = _mm256_loadu_ps(row + kx);
                            const __m256 v1 = _mm256_loadu_ps(row + kx + 8);
                            for (int j = 0; j < oc_block; ++j) {
                                const __m256 w = _mm256_broadcast_ss(wp + j);
                                acc[j][0] = _mm256_fmadd_ps(w, v0, acc[j][0]);
                                acc[j][1] = _mm256_fmadd_ps(w, v1, acc[j][1]);
                            }
                        }
                    }
                }
                for (int j = 0; j < nb; ++j) {
                    float* out = p.output + (ob + j) * out_plane + static_cast<std::size_t>(oy) * ow + ox;
                    _mm256_storeu_ps(out, acc[j][0]);
                    _mm256_storeu_ps(out + 8, acc[j][1]);
                }
            }
            for (; ox + 8 <= ow; ox += 8) {
                __m256 acc[oc_block];
                for (int j = 0; j < oc_block; ++j) acc[j] = _mm256_set1_ps(bias[j]);
                const float* wp = packed.data();
                for (int ic = 0; ic < p.in_channels; ++ic) {
                    const float* plane = p.input + ic * in_plane;
                    for (int ky = 0; ky < k; ++ky) {
                        const float* row = plane + static_cast<std::size_t>(oy + ky) * p.padded_width + ox;
                        for (int kx = 0; kx < k; ++kx, wp += oc_block) {
                            const __m256 v = _mm256_loadu_ps(row + kx);
                            for (int j = 0; j < oc_block; ++j) {
                                acc[j] = _mm256_fmadd_ps(_mm256_broadcast_ss(wp + j), v, acc[j]);
                            }
                        }
                    }
                }
                for (int j = 0; j < nb; ++j) {
                    _mm256_storeu_ps(p.output + (ob + j) * out_plane + static_cast<std::size_t>(oy) * ow + ox, acc[j]);
                }
            }
            for (; ox < ow; ++ox) {
                float acc[oc_block];
                std::copy(bias, bias + oc_block, acc);
                const float* wp = packed.data();
                for (int ic = 0; ic < p.in_channels; ++ic) {
                    const float* plane = p.input + ic * in_plane;
                    for (int ky = 0; ky < k; ++ky) {
                        const float* row = plane + static_cast<std::size_t>(oy + ky) * p.padded_width + ox;
                        for (int kx = 0; kx < k; ++kx, wp += oc_block) {
                            for (int j = 0; j < oc_block; ++j) acc[j] = std::fma(wp[j], row[kx], acc[j]);
                        }
                    }
                }
                for (int j = 0; j < nb; ++j) {
                    p.output[(ob + j) * out_plane + static_cast<std::size_t>(oy) * ow + ox] = acc[j];
                }
            }
        }
    }
}

}  // namespace

const KernelTable table{Level::avx2, axpy_f32, axpy_f64, leaky_relu_f32, conv2d_f32};

}  // namespace dforge::simd::avx2
