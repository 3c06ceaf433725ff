#include <doctest.h>

#include <cmath>

#include "dforge/error.hpp"
#include "dforge/pipeline/blur_kernels.hpp"
#include "dforge/pipeline/filter.hpp"
#include "dforge/pipeline/resize.hpp"
#include "oracles.hpp"

using namespace dforge;

namespace {

double max_diff(const Image& a, const Image& b) {
    REQUIRE(a.height() == b.height());
    REQUIRE(a.width() == b.width());
    double d = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

Kernel make_kernel(int size, std::vector<double> w) {
    Kernel k;
    k.size = size;
    k.weights = std::move(w);
    return k;
}

}  // namespace

TEST_CASE("reflect padding indices") {
    CHECK(reflect_index(-1, 5) == 1);
    CHECK(reflect_index(-2, 5) == 2);
    CHECK(reflect_index(5, 5) == 3);
    CHECK(reflect_index(6, 5) == 2);
    CHECK(reflect_index(3, 5) == 3);
}

TEST_CASE("identity kernel returns the input exactly") {
    const Image img = oracle::random_image(9, 11, 1);
    std::vector<double> w(25, 0.0);
    w[12] = 1.0;
    CHECK(convolve(img, make_kernel(5, w)) == img);
}

TEST_CASE("constant image survives any normalized kernel") {
    const Image flat(16, 16, 0.61);
    const auto out = convolve(flat, gaussian_kernel(4, 1.3, 0.5, 0.7));
    for (double v : out.data()) CHECK(std::abs(v - 0.61) <= 1e-7);
}

TEST_CASE("ramp with a uniform 3x3 kernel matches the nested-loop oracle") {
    Image ramp(5, 5);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 5; ++x) ramp.at(c, y, x) = (y * 5 + x) / 24.0;
    const std::vector<double> box(9, 1.0 / 9.0);
    CHECK(max_diff(convolve(ramp, make_kernel(3, box)), oracle::convolve(ramp, box, 3)) <= 1e-12);
}

TEST_CASE("convolution agrees with the oracle on random 8x8 images") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Image img = oracle::random_image(8, 8, seed);
        const auto k = gaussian_kernel(3, 0.3 + 0.1 * double(seed), 0.9, 0.2 * double(seed));
        CHECK(max_diff(convolve(img, k), oracle::convolve(img, k.weights, k.size)) <= 1e-6);
    }
}

TEST_CASE("kernel larger than the image is a dimension error") {
    const Image img = oracle::random_image(6, 20, 3);
    try {
        convolve(img, gaussian_kernel(4, 1.0, 1.0, 0.0));
        FAIL("expected dimension error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::dimension);
    }
}

TEST_CASE("resize at scale 1 is the identity") {
    const Image img = oracle::random_image(7, 13, 4);
    CHECK(resize(img, 1.0, ResizeMode::area) == img);
    CHECK(resize(img, 1.0, ResizeMode::bilinear) == img);
    CHECK(max_diff(resize(img, 1.0, ResizeMode::bicubic), img) <= 1e-7);
}

TEST_CASE("area halving of a 2x2 checker is its mean") {
    Image img(2, 2);
    for (int c = 0; c < 3; ++c) {
        img.at(c, 0, 0) = 0.0;
        img.at(c, 0, 1) = 1.0;
        img.at(c, 1, 0) = 1.0;
        img.at(c, 1, 1) = 0.0;
    }
    const auto out = resize(img, 0.5, ResizeMode::area);
    REQUIRE(out.height() == 1);
    REQUIRE(out.width() == 1);
    for (int c = 0; c < 3; ++c) CHECK(out.at(c, 0, 0) == doctest::Approx(0.5));
}

TEST_CASE("bilinear 4x4 ramp halving matches the sampling formula") {
    Image ramp(4, 4);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x) ramp.at(c, y, x) = (4 * y + x) / 15.0;
    const auto out = resize(ramp, 0.5, ResizeMode::bilinear);
    // Source coordinate (d + 0.5) * 2 - 0.5 = 0.5 and 2.5: midpoints.
    for (int c = 0; c < 3; ++c) {
        CHECK(out.at(c, 0, 0) == doctest::Approx((0 + 1 + 4 + 5) / 4.0 / 15.0));
        CHECK(out.at(c, 1, 1) == doctest::Approx((10 + 11 + 14 + 15) / 4.0 / 15.0));
    }
    CHECK(max_diff(out, oracle::bilinear(ramp, 2, 2)) <= 1e-12);
}

TEST_CASE("resize agrees with direct oracles on random 8x8 images") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Image img = oracle::random_image(8, 8, seed + 40);
        for (double scale : {0.25, 0.5, 0.625, 0.9, 1.3, 1.5}) {
            const int oh = static_cast<int>(std::floor(8 * scale));
            CHECK(max_diff(resize(img, scale, ResizeMode::bilinear), oracle::bilinear(img, oh, oh, scale)) <= 1e-5);
            CHECK(max_diff(resize(img, scale, ResizeMode::bicubic), oracle::bicubic(img, oh, oh, scale)) <= 1e-5);
            CHECK(max_diff(resize(img, scale, ResizeMode::area), oracle::area(img, oh, oh, scale)) <= 1e-5);
        }
    }
}

TEST_CASE("resize_to hits arbitrary sizes") {
    const Image img = oracle::random_image(10, 14, 9);
    const auto out = resize_to(img, 3, 5, ResizeMode::bicubic);
    CHECK(out.height() == 3);
    CHECK(out.width() == 5);
    CHECK(max_diff(out, oracle::bicubic(img, 3, 5)) <= 1e-5);
    CHECK(max_diff(resize_to(img, 3, 5, ResizeMode::area), oracle::area(img, 3, 5)) <= 1e-5);
}

TEST_CASE("cubic weights") {
    CHECK(cubic_weight(0.0) == 1.0);
    CHECK(cubic_weight(1.0) == doctest::Approx(0.0));
    CHECK(cubic_weight(2.0) == 0.0);
    CHECK(cubic_weight(0.5) == doctest::Approx(0.5625));
    CHECK(cubic_weight(1.5) == doctest::Approx(-0.0625));
}

TEST_CASE("resize to zero pixels is a dimension error") {
    const Image img = oracle::random_image(4, 4, 2);
    CHECK_THROWS_AS(resize(img, 0.1, ResizeMode::area), Error);
    CHECK_THROWS_AS(resize(img, -1.0, ResizeMode::area), Error);
}

TEST_CASE("resize output stays in range") {
    Image edge(8, 8);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) edge.at(c, y, x) = x < 4 ? 0.0 : 1.0;
    const auto up = resize(edge, 1.5, ResizeMode::bicubic);
    for (double v : up.data()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}
