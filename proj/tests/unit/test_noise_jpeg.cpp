#include <doctest.h>

#include <cmath>

#include "dforge/error.hpp"
#include "dforge/metrics/metrics.hpp"
#include "dforge/pipeline/jpeg.hpp"
#include "dforge/pipeline/noise.hpp"

using namespace dforge;

namespace {

double delta_std(const Image& out, const Image& in, int channel) {
    double s = 0.0, s2 = 0.0;
    const auto a = out.plane(channel), b = in.plane(channel);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d;
        s2 += d * d;
    }
    const double n = static_cast<double>(a.size());
    return std::sqrt(s2 / n - (s / n) * (s / n));
}

// Smooth gradients plus a few oriented waves: enough structure for JPEG to
// discard at low quality.
Image natural_like(int h, int w) {
    Image img(h, w);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double v = 0.5 + 0.2 * std::sin(0.11 * x + 0.05 * y + c) + 0.15 * std::cos(0.37 * y - 0.2 * x) +
                                 0.1 * std::sin(0.9 * x * (c + 1) / 3.0);
                img.at(c, y, x) = std::clamp(v, 0.0, 1.0);
            }
    return img;
}

}  // namespace

TEST_CASE("gaussian noise has the requested standard deviation") {
    const Image gray(256, 256, 0.5);
    for (double sigma : {1.0, 10.0, 30.0}) {
        Rng rng(7);
        const auto out = add_gaussian_noise(gray, sigma, false, rng);
        for (int c = 0; c < 3; ++c) CHECK(std::abs(delta_std(out, gray, c) / (sigma / 255.0) - 1.0) <= 0.05);
    }
}

TEST_CASE("gray gaussian noise shares one realization across channels") {
    const Image gray(64, 64, 0.5);
    Rng rng(3);
    const auto out = add_gaussian_noise(gray, 15.0, true, rng);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            CHECK(out.at(0, y, x) == out.at(1, y, x));
            CHECK(out.at(1, y, x) == out.at(2, y, x));
        }
}

TEST_CASE("noise is deterministic per seed and clamps") {
    const Image gray(32, 32, 0.97);
    Rng a(11), b(11);
    const auto x = add_gaussian_noise(gray, 30.0, false, a);
    CHECK(x == add_gaussian_noise(gray, 30.0, false, b));
    Rng c(12), d(12);
    const auto y = add_poisson_noise(gray, 3.0, true, c);
    CHECK(y == add_poisson_noise(gray, 3.0, true, d));
    for (double v : x.data()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("poisson noise strength grows with scale") {
    const Image gray(256, 256, 0.5);
    Rng a(5), b(5);
    const double weak = delta_std(add_poisson_noise(gray, 0.1, false, a), gray, 0);
    const double strong = delta_std(add_poisson_noise(gray, 1.0, false, b), gray, 0);
    CHECK(strong > weak);
}

TEST_CASE("poisson noise variance follows v * scale / 255") {
    const Image gray(256, 256, 0.5);
    Rng rng(9);
    const double scale = 0.05;
    const auto out = add_poisson_noise(gray, scale, false, rng);
    const double want = std::sqrt(0.5 * scale / 255.0);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(delta_std(out, gray, c) / want - 1.0) <= 0.10);
}

TEST_CASE("gray poisson noise adds one delta to all channels") {
    Image img(32, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            img.at(0, y, x) = 0.3;
            img.at(1, y, x) = 0.5;
            img.at(2, y, x) = 0.6;
        }
    Rng rng(2);
    const auto out = add_poisson_noise(img, 1.0, true, rng);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            const double d0 = out.at(0, y, x) - 0.3, d1 = out.at(1, y, x) - 0.5, d2 = out.at(2, y, x) - 0.6;
            CHECK(std::abs(d0 - d1) <= 1e-12);
            CHECK(std::abs(d1 - d2) <= 1e-12);
        }
}

TEST_CASE("jpeg quality ordering on a natural-looking image") {
    const Image img = natural_like(96, 128);
    CHECK(psnr_y(jpeg_roundtrip(img, 95), img) > psnr_y(jpeg_roundtrip(img, 30), img));
}

TEST_CASE("jpeg keeps constant images constant") {
    for (int q : {30, 60, 95}) {
        const Image flat(24, 40, 0.42);
        const auto out = jpeg_roundtrip(flat, q);
        for (double v : out.data()) CHECK(std::abs(v - 0.42) <= 2.0 / 255.0 + 1e-12);
    }
}

TEST_CASE("jpeg is deterministic and range checked") {
    const Image img = natural_like(33, 47);
    CHECK(jpeg_roundtrip(img, 55) == jpeg_roundtrip(img, 55));
    CHECK(encode_jpeg(img, 55) == encode_jpeg(img, 55));
    CHECK_THROWS_AS(jpeg_roundtrip(img, 29), Error);
    CHECK_THROWS_AS(jpeg_roundtrip(img, 96), Error);
    const auto out = jpeg_roundtrip(img, 30);
    CHECK(out.height() == 33);
    CHECK(out.width() == 47);
}

TEST_CASE("jpeg stream uses 4:2:0 chroma subsampling") {
    const auto bytes = encode_jpeg(natural_like(16, 16), 80);
    // Baseline SOF0 marker: FF C0, length, precision, h, w, components, then
    // per component (id, sampling, table).
    std::size_t i = 0;
    while (i + 1 < bytes.size() && !(bytes[i] == 0xFF && bytes[i + 1] == 0xC0)) ++i;
    REQUIRE(i + 15 < bytes.size());
    CHECK(bytes[i + 9] == 3);
    CHECK(bytes[i + 11] == 0x22);
    CHECK(bytes[i + 14] == 0x11);
}
