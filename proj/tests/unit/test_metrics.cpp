#include <doctest.h>

#include <cmath>
#include <random>

#include "dforge/degradation/sampler.hpp"
#include "dforge/error.hpp"
#include "dforge/metrics/metrics.hpp"
#include "dforge/pipeline/noise.hpp"
#include "oracles.hpp"

using namespace dforge;

TEST_CASE("psnr_y closed forms") {
    const Image a(8, 8, 0.5), b(8, 8, 0.6);
    CHECK(psnr_y(a, b) == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(std::isinf(psnr_y(a, a)));
    const Image x = oracle::random_image(10, 12, 1), y = oracle::random_image(10, 12, 2);
    CHECK(psnr_y(x, y) == psnr_y(y, x));
    CHECK(psnr_y(x, y) == doctest::Approx(oracle::psnr_y(x, y)).epsilon(1e-12));
    CHECK_THROWS_AS(psnr_y(x, Image(10, 11)), Error);
}

TEST_CASE("psnr_y decreases as noise grows") {
    const Image img = oracle::random_image(64, 64, 3);
    double prev = std::numeric_limits<double>::infinity();
    for (double sigma : {2.0, 10.0, 30.0}) {
        Rng rng(4);
        const double p = psnr_y(add_gaussian_noise(img, sigma, false, rng), img);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("regression loss is the plain l1 sum") {
    std::vector<double> v(33, 0.3), w = v;
    CHECK(regression_loss(v, w) == 0.0);
    w[7] += 0.25;
    CHECK(regression_loss(v, w) == doctest::Approx(0.25));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> a(33), b(33), c(33);
        for (int i = 0; i < 33; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
            c[i] = u(rng);
        }
        double naive = 0.0;
        for (int i = 0; i < 33; ++i) naive += std::abs(a[i] - b[i]);
        CHECK(std::abs(regression_loss(a, b) - naive) <= 1e-9);
        CHECK(regression_loss(a, b) >= 0.0);
        CHECK(regression_loss(a, c) <= regression_loss(a, b) + regression_loss(b, c) + 1e-12);
    }
    CHECK_THROWS_AS(regression_loss(v, std::vector<double>(32, 0.0)), Error);
}

TEST_CASE("pixel loss is the mean absolute difference") {
    const Image a(4, 4, 0.0), b(4, 4, 1.0);
    CHECK(pixel_loss(a, b) == 1.0);
    CHECK(pixel_loss(a, a) == 0.0);
    const Image x = oracle::random_image(4, 4, 8), y = oracle::random_image(4, 4, 9);
    double naive = 0.0;
    for (std::size_t i = 0; i < x.data().size(); ++i) naive += std::abs(x.data()[i] - y.data()[i]);
    CHECK(std::abs(pixel_loss(x, y) - naive / 48.0) <= 1e-9);
    CHECK_THROWS_AS(pixel_loss(x, Image(5, 4)), Error);
}

TEST_CASE("total loss weighting") {
    CHECK(total_loss(1, 1, 1, 1) == doctest::Approx(3.1));
    CHECK(total_loss(0, 0, 0, 0) == 0.0);
    CHECK(total_loss(0.7, 5, 6, 7, LossWeights{0, 0, 0}) == 0.7);
    CHECK_THROWS_AS(total_loss(1, 1, 1, 1, LossWeights{-1, 1, 1}), Error);
    // Linear in each component.
    const LossWeights w{0.5, 2.0, 0.1};
    const double base = total_loss(0.2, 0.3, 0.4, 0.5, w);
    CHECK(total_loss(0.2, 1.3, 0.4, 0.5, w) - base == doctest::Approx(0.5));
    CHECK(total_loss(0.2, 0.3, 1.4, 0.5, w) - base == doctest::Approx(2.0));
    CHECK(total_loss(0.2, 0.3, 0.4, 1.5, w) - base == doctest::Approx(0.1));
    CHECK(total_loss(1.2, 0.3, 0.4, 0.5, w) - base == doctest::Approx(1.0));
}
