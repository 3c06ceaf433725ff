#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "dforge/engine/forward.hpp"
#include "dforge/error.hpp"
#include "dforge/simd/kernels.hpp"
#include "oracles.hpp"

using namespace dforge;

namespace {

std::vector<simd::Level> levels() {
    std::vector<simd::Level> out{simd::Level::scalar};
    if (simd::supported(simd::Level::avx2)) out.push_back(simd::Level::avx2);
    return out;
}

std::vector<float> random_floats(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(-2.0f, 2.0f);
    std::vector<float> v(n);
    for (float& x : v) x = u(rng);
    return v;
}

// Restores the process-wide level on scope exit.
struct LevelGuard {
    simd::Level saved = simd::active_level();
    ~LevelGuard() { simd::set_level(saved); }
};

simd::Conv2dArgs conv_args(const std::vector<float>& in, int ic, int ph, int pw, const std::vector<float>& w,
                           const std::vector<float>* b, int oc, int k, int stride, std::vector<float>& out, int& oh,
                           int& ow) {
    oh = (ph - k) / stride + 1;
    ow = (pw - k) / stride + 1;
    out.assign(static_cast<std::size_t>(oc) * oh * ow, 0.0f);
    simd::Conv2dArgs a;
    a.input = in.data();
    a.in_channels = ic;
    a.padded_height = ph;
    a.padded_width = pw;
    a.weight = w.data();
    a.bias = b ? b->data() : nullptr;
    a.out_channels = oc;
    a.kernel = k;
    a.stride = stride;
    a.output = out.data();
    a.out_height = oh;
    a.out_width = ow;
    return a;
}

}  // namespace

TEST_CASE("scalar level is always available and selectable") {
    CHECK(simd::supported(simd::Level::scalar));
    LevelGuard guard;
    simd::set_level(simd::Level::scalar);
    CHECK(simd::active_level() == simd::Level::scalar);
    CHECK(simd::kernels().level == simd::Level::scalar);
    if (!simd::supported(simd::Level::avx2)) {
        CHECK_THROWS_AS(simd::set_level(simd::Level::avx2), Error);
    }
}

TEST_CASE("axpy variants agree with the scalar reference") {
    const auto& ref = simd::kernels(simd::Level::scalar);
    for (auto level : levels()) {
        const auto& k = simd::kernels(level);
        for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u, 64u, 1001u}) {
            auto y1 = random_floats(n, 1), y2 = y1;
            const auto x = random_floats(n, 2);
            ref.axpy_f32(y1.data(), x.data(), 0.37f, n);
            k.axpy_f32(y2.data(), x.data(), 0.37f, n);
            for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-6));

            std::vector<double> d1(n), d2(n), dx(n);
            for (std::size_t i = 0; i < n; ++i) {
                d1[i] = d2[i] = y1[i];
                dx[i] = x[i];
            }
            ref.axpy_f64(d1.data(), dx.data(), -1.25, n);
            k.axpy_f64(d2.data(), dx.data(), -1.25, n);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(d2[i] - d1[i]) <= 1e-14 * (1 + std::abs(d1[i])));
        }
    }
}

TEST_CASE("leaky relu variants are bit-identical") {
    const auto& ref = simd::kernels(simd::Level::scalar);
    for (auto level : levels()) {
        for (std::size_t n : {1u, 8u, 13u, 100u}) {
            auto a = random_floats(n, 3), b = a;
            a[0] = -0.0f;
            b[0] = -0.0f;
            ref.leaky_relu_f32(a.data(), n, 0.2f);
            simd::kernels(level).leaky_relu_f32(b.data(), n, 0.2f);
            CHECK(std::memcmp(a.data(), b.data(), n * sizeof(float)) == 0);
        }
    }
}

TEST_CASE("conv2d kernels match the naive oracle across shapes") {
    struct Case {
        int ic, oc, h, w, k, stride;
    };
    const Case cases[] = {{3, 4, 8, 8, 3, 1},   {3, 5, 9, 23, 3, 1}, {8, 7, 12, 17, 3, 1},
                          {2, 3, 10, 40, 5, 1}, {4, 6, 11, 13, 3, 2}, {1, 1, 3, 3, 1, 1}};
    for (const Case& c : cases) {
        const auto in = oracle::random_features(c.ic, c.h, c.w, 11);
        const auto w = oracle::random_tensor("w", {c.oc, c.ic, c.k, c.k}, 12);
        const auto b = oracle::random_tensor("b", {c.oc}, 13);
        const int pad = c.k / 2;
        const auto want = oracle::conv2d(in, w, &b, c.stride, pad);
        LevelGuard guard;
        for (auto level : levels()) {
            simd::set_level(level);
            const auto got = conv2d_forward(in, w, &b, c.stride, pad);
            REQUIRE(got.channels == want.channels);
            REQUIRE(got.height == want.height);
            REQUIRE(got.width == want.width);
            for (std::size_t i = 0; i < got.data.size(); ++i) {
                CHECK(std::abs(got.data[i] - want.data[i]) <= 1e-5 * (1 + std::abs(want.data[i])));
            }
        }
    }
}

TEST_CASE("conv2d partial channel ranges write only their channels") {
    for (auto level : levels()) {
        const auto& k = simd::kernels(level);
        const int ic = 3, oc = 9, ph = 10, pw = 21, ks = 3;
        const auto in = random_floats(static_cast<std::size_t>(ic) * ph * pw, 5);
        const auto w = random_floats(static_cast<std::size_t>(oc) * ic * ks * ks, 6);
        std::vector<float> full, part;
        int oh = 0, ow = 0;
        auto a = conv_args(in, ic, ph, pw, w, nullptr, oc, ks, 1, full, oh, ow);
        k.conv2d_f32(a, 0, oc);
        auto b = conv_args(in, ic, ph, pw, w, nullptr, oc, ks, 1, part, oh, ow);
        std::fill(part.begin(), part.end(), 42.0f);
        k.conv2d_f32(b, 2, 7);
        const std::size_t plane = static_cast<std::size_t>(oh) * ow;
        for (int c = 0; c < oc; ++c) {
            for (std::size_t i = 0; i < plane; ++i) {
                const float v = part[c * plane + i];
                if (c >= 2 && c < 7) {
                    CHECK(v == full[c * plane + i]);
                } else {
                    CHECK(v == 42.0f);
                }
            }
        }
    }
}

TEST_CASE("avx2 and scalar conv agree on a wide layer") {
    if (!simd::supported(simd::Level::avx2)) return;
    const auto in = oracle::random_features(64, 20, 37, 21);
    const auto w = oracle::random_tensor("w", {64, 64, 3, 3}, 22, 0.05);
    const auto b = oracle::random_tensor("b", {64}, 23);
    LevelGuard guard;
    simd::set_level(simd::Level::scalar);
    const auto s = conv2d_forward(in, w, &b, 1, 1);
    simd::set_level(simd::Level::avx2);
    const auto v = conv2d_forward(in, w, &b, 1, 1);
    for (std::size_t i = 0; i < s.data.size(); ++i) CHECK(std::abs(s.data[i] - v.data[i]) <= 1e-5f);
}
