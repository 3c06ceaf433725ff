#pragma once

#include "dforge/degradation/params.hpp"
#include "dforge/image.hpp"

namespace dforge {

// Output is floor(H*scale) x floor(W*scale). Bilinear and bicubic sample at
// source coordinate (d + 0.5) / scale - 0.5 (bicubic: a = -0.5, border
// replicate); area averages the covered source cells weighted by overlap.
// Output clamped to [0,1].
Image resize(const Image& img, double scale, ResizeMode mode);

// Resize to an explicit size; per-axis scale is out/in.
Image resize_to(const Image& img, int height, int width, ResizeMode mode);

// Catmull-Rom-family cubic weight (a = -0.5).
double cubic_weight(double x) noexcept;

}  // namespace dforge
