#include "dforge/pipeline/resize.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dforge/error.hpp"

namespace dforge {

double cubic_weight(double x) noexcept {
    constexpr double a = -0.5;
    x = std::abs(x);
    if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

namespace {

struct Tap {
    int index;
    double weight;
};

// Taps for each output coordinate along one axis.
std::vector<std::vector<Tap>> axis_taps(int in, int out, double scale, ResizeMode mode) {
    std::vector<std::vector<Tap>> taps(out);
    for (int d = 0; d < out; ++d) {
        auto& t = taps[d];
        switch (mode) {
            case ResizeMode::area: {
                const double lo = d / scale;
                const double hi = std::min((d + 1) / scale, static_cast<double>(in));
                double total = 0.0;
                for (int i = static_cast<int>(std::floor(lo)); i < in && i < hi; ++i) {
                    const double overlap = std::min(hi, i + 1.0) - std::max(lo, static_cast<double>(i));
                    if (overlap > 1e-12) {
                        t.push_back({i, overlap});
                        total += overlap;
                    }
                }
                if (t.empty()) {
                    t.push_back({std::min(static_cast<int>(lo), in - 1), 1.0});
                    total = 1.0;
                }
                for (auto& tap : t) tap.weight /= total;
                break;
            }
            case ResizeMode::bilinear: {
                const double src = std::clamp((d + 0.5) / scale - 0.5, 0.0, static_cast<double>(in - 1));
                const int i0 = static_cast<int>(std::floor(src));
                const double f = src - i0;
                const int i1 = std::min(i0 + 1, in - 1);
                t.push_back({i0, 1.0 - f});
                if (f != 0.0) t.push_back({i1, f});
                break;
            }
            case ResizeMode::bicubic: {
                const double src = (d + 0.5) / scale - 0.5;
                const int i0 = static_cast<int>(std::floor(src));
                const double f = src - i0;
                for (int j = -1; j <= 2; ++j) {
                    const double w = cubic_weight(j - f);
                    if (w != 0.0) t.push_back({std::clamp(i0 + j, 0, in - 1), w});
                }
                break;
            }
        }
    }
    return taps;
}

Image resample(const Image& img, int out_h, int out_w, double scale_y, double scale_x, ResizeMode mode) {
    if (out_h < 1 || out_w < 1) {
        throw Error(ErrorCode::dimension, "resize produces an empty image (" + std::to_string(out_h) + "x" +
                                              std::to_string(out_w) + ")");
    }
    const int in_h = img.height();
    const int in_w = img.width();
    const auto tx = axis_taps(in_w, out_w, scale_x, mode);
    const auto ty = axis_taps(in_h, out_h, scale_y, mode);

    std::vector<double> tmp(static_cast<std::size_t>(in_h) * out_w);
    Image out(out_h, out_w);
    for (int c = 0; c < Image::channels; ++c) {
        auto src = img.plane(c);
        for (int y = 0; y < in_h; ++y) {
            const double* row = src.data() + static_cast<std::size_t>(y) * in_w;
            double* trow = tmp.data() + static_cast<std::size_t>(y) * out_w;
            for (int x = 0; x < out_w; ++x) {
                double acc = 0.0;
                for (const Tap& t : tx[x]) acc += t.weight * row[t.index];
                trow[x] = acc;
            }
        }
        auto dst = out.plane(c);
        for (int y = 0; y < out_h; ++y) {
            double* orow = dst.data() + static_cast<std::size_t>(y) * out_w;
            std::fill(orow, orow + out_w, 0.0);
            for (const Tap& t : ty[y]) {
                const double* trow = tmp.data() + static_cast<std::size_t>(t.index) * out_w;
                for (int x = 0; x < out_w; ++x) orow[x] += t.weight * trow[x];
            }
        }
    }
    out.clamp01();
    return out;
}

}  // namespace

Image resize(const Image& img, double scale, ResizeMode mode) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorCode::domain, "resize scale must be positive");
    const int out_h = static_cast<int>(std::floor(img.height() * scale));
    const int out_w = static_cast<int>(std::floor(img.width() * scale));
    return resample(img, out_h, out_w, scale, scale, mode);
}

Image resize_to(const Image& img, int height, int width, ResizeMode mode) {
    if (height < 1 || width < 1) throw Error(ErrorCode::dimension, "resize target must be positive");
    return resample(img, height, width, static_cast<double>(height) / img.height(),
                    static_cast<double>(width) / img.width(), mode);
}

}  // namespace dforge
