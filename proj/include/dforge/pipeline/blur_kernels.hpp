#pragma once

#include <vector>

namespace dforge {

// Square, odd-sized filter kernel stored row-major. Weights sum to 1.
struct Kernel {
    int size = 0;
    std::vector<double> weights;

    int half() const noexcept { return size / 2; }
    double at(int row, int col) const noexcept { return weights[static_cast<std::size_t>(row) * size + col]; }
    double sum() const noexcept;
    Kernel transposed() const;
};

// Anisotropic Gaussian with covariance R(theta) diag(sigma1^2, sigma2^2) R(theta)^T
// sampled at integer offsets (column = x, row = y) of a (2m+1)^2 grid.
Kernel gaussian_kernel(int half, double sigma1, double sigma2, double theta);

// Circular low-pass: omega_c * J1(omega_c r) / (2 pi r), centre omega_c^2 / (4 pi).
Kernel sinc_kernel(int half, double omega_c);

}  // namespace dforge
