#include "dforge/pipeline/noise.hpp"

#include <cmath>

#include "dforge/error.hpp"

namespace dforge {

namespace {

double poisson_sample(Rng& rng, double mean) {
    if (mean <= 0.0) return 0.0;
    return static_cast<double>(std::poisson_distribution<long long>(mean)(rng));
}

}  // namespace

Image add_gaussian_noise(const Image& img, double sigma255, bool gray, Rng& rng) {
    if (!(sigma255 > 0.0) || !std::isfinite(sigma255)) {
        throw Error(ErrorCode::domain, "gaussian noise sigma must be positive");
    }
    std::normal_distribution<double> normal(0.0, sigma255 / 255.0);
    Image out = img;
    const std::size_t n = img.plane_size();
    if (gray) {
        auto r = out.plane(0);
        auto g = out.plane(1);
        auto b = out.plane(2);
        for (std::size_t i = 0; i < n; ++i) {
            const double e = normal(rng);
            r[i] += e;
            g[i] += e;
            b[i] += e;
        }
    } else {
        for (int c = 0; c < Image::channels; ++c) {
            for (double& v : out.plane(c)) v += normal(rng);
        }
    }
    out.clamp01();
    return out;
}

Image add_poisson_noise(const Image& img, double scale, bool gray, Rng& rng) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::domain, "poisson noise scale must be positive");
    }
    const double photons = 255.0 / scale;
    Image out = img;
    const std::size_t n = img.plane_size();
    if (gray) {
        auto r = out.plane(0);
        auto g = out.plane(1);
        auto b = out.plane(2);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
            const double e = poisson_sample(rng, y * photons) / photons - y;
            r[i] += e;
            g[i] += e;
            b[i] += e;
        }
    } else {
        for (int c = 0; c < Image::channels; ++c) {
            for (double& v : out.plane(c)) v = poisson_sample(rng, v * photons) / photons;
        }
    }
    out.clamp01();
    return out;
}

}  // namespace dforge
