#include "dforge/pipeline/blur_kernels.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "dforge/error.hpp"

namespace dforge {

using std::numbers::pi;

double Kernel::sum() const noexcept { return std::accumulate(weights.begin(), weights.end(), 0.0); }

Kernel Kernel::transposed() const {
    Kernel t{size, std::vector<double>(weights.size())};
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) t.weights[static_cast<std::size_t>(c) * size + r] = at(r, c);
    return t;
}

namespace {

void check_half(int half) {
    if (half < 3 || half > 10) {
        throw Error(ErrorCode::domain, "kernel half-size must lie in [3, 10], got " + std::to_string(half));
    }
}

void normalize(Kernel& k) {
    const double total = k.sum();
    for (double& w : k.weights) w /= total;
}

}  // namespace

Kernel gaussian_kernel(int half, double sigma1, double sigma2, double theta) {
    check_half(half);
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
        throw Error(ErrorCode::domain, "gaussian sigma must be positive");
    }
    // Inverse covariance R diag(1/s1^2, 1/s2^2) R^T.
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double i1 = 1.0 / (sigma1 * sigma1);
    const double i2 = 1.0 / (sigma2 * sigma2);
    const double a = c * c * i1 + s * s * i2;
    const double b = c * s * (i1 - i2);
    const double d = s * s * i1 + c * c * i2;

    Kernel k{2 * half + 1, {}};
    k.weights.resize(static_cast<std::size_t>(k.size) * k.size);
    for (int y = -half; y <= half; ++y) {
        for (int x = -half; x <= half; ++x) {
            const double q = a * x * x + 2.0 * b * x * y + d * y * y;
            k.weights[static_cast<std::size_t>(y + half) * k.size + (x + half)] = std::exp(-0.5 * q);
        }
    }
    normalize(k);
    return k;
}

Kernel sinc_kernel(int half, double omega_c) {
    check_half(half);
    if (!(omega_c >= pi / 3 - 1e-12 && omega_c <= pi + 1e-12)) {
        throw Error(ErrorCode::domain, "sinc cutoff must lie in [pi/3, pi]");
    }
    Kernel k{2 * half + 1, {}};
    k.weights.resize(static_cast<std::size_t>(k.size) * k.size);
    for (int y = -half; y <= half; ++y) {
        for (int x = -half; x <= half; ++x) {
            // r depends on x*x + y*y only, so k(i,j) == k(-i,-j) bit for bit.
            const double r = std::sqrt(static_cast<double>(x * x + y * y));
            const double w = r == 0.0 ? omega_c * omega_c / (4.0 * pi)
                                      : omega_c * std::cyl_bessel_j(1.0, omega_c * r) / (2.0 * pi * r);
            k.weights[static_cast<std::size_t>(y + half) * k.size + (x + half)] = w;
        }
    }
    normalize(k);
    return k;
}

}  // namespace dforge
