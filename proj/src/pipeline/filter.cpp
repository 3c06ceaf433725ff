#include "dforge/pipeline/filter.hpp"

#include <string>
#include <vector>

#include "dforge/error.hpp"
#include "dforge/simd/kernels.hpp"

namespace dforge {

Image convolve(const Image& img, const Kernel& k) {
    if (k.size <= 0 || k.size % 2 == 0) throw Error(ErrorCode::dimension, "kernel size must be odd");
    if (k.size > img.height() || k.size > img.width()) {
        throw Error(ErrorCode::dimension, "kernel " + std::to_string(k.size) + "x" + std::to_string(k.size) +
                                              " larger than image " + std::to_string(img.height()) + "x" +
                                              std::to_string(img.width()));
    }
    const auto& simd = simd::kernels();
    const int h = img.height();
    const int w = img.width();
    const int half = k.half();
    const int pw = w + 2 * half;
    const int ph = h + 2 * half;
    std::vector<double> padded(static_cast<std::size_t>(pw) * ph);

    Image out(h, w);
    for (int c = 0; c < Image::channels; ++c) {
        for (int y = 0; y < ph; ++y) {
            const int sy = reflect_index(y - half, h);
            for (int x = 0; x < pw; ++x) {
                padded[static_cast<std::size_t>(y) * pw + x] = img.at(c, sy, reflect_index(x - half, w));
            }
        }
        auto plane = out.plane(c);
        for (int y = 0; y < h; ++y) {
            double* orow = plane.data() + static_cast<std::size_t>(y) * w;
            for (int ky = 0; ky < k.size; ++ky) {
                const double* src = padded.data() + static_cast<std::size_t>(y + ky) * pw;
                for (int kx = 0; kx < k.size; ++kx) {
                    simd.axpy_f64(orow, src + kx, k.at(ky, kx), static_cast<std::size_t>(w));
                }
            }
        }
    }
    out.clamp01();
    return out;
}

}  // namespace dforge
