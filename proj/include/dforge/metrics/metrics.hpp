#pragma once

#include <span>

#include "dforge/image.hpp"

namespace dforge {

// BT.601 full-range luma.
double luma(double r, double g, double b) noexcept;

// PSNR on the luma channel; +infinity when the images are identical.
// Throws Error(dimension) on a size mismatch.
double psnr_y(const Image& a, const Image& b, double peak = 1.0);

// Sum of absolute coordinate differences. Throws Error(invalid_input) on a
// length mismatch or non-finite input.
double regression_loss(std::span<const double> predicted, std::span<const double> target);

// Mean absolute difference over all pixels and channels.
double pixel_loss(const Image& output, const Image& target);

struct LossWeights {
    double regression = 1.0;
    double perceptual = 1.0;
    double adversarial = 0.1;
};

// pixel + w.regression*regression + w.perceptual*perceptual + w.adversarial*adversarial.
// Throws Error(invalid_input) on negative weights or non-finite components.
double total_loss(double pixel, double regression, double perceptual, double adversarial,
                  const LossWeights& w = {});

}  // namespace dforge
