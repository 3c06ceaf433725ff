#pragma once

#include "dforge/degradation/sampler.hpp"
#include "dforge/image.hpp"

namespace dforge {

// Additive i.i.d. normal noise with std sigma255 / 255. With `gray`, one
// realization per pixel is shared by all channels. Clamped to [0,1].
Image add_gaussian_noise(const Image& img, double sigma255, bool gray, Rng& rng);

// out = Poisson(in * L) / L with L = 255 / scale. With `gray`, the noise is
// drawn on luminance (BT.601) and the same delta is added to every channel.
Image add_poisson_noise(const Image& img, double scale, bool gray, Rng& rng);

}  // namespace dforge
