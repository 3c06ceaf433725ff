#pragma once

#include "dforge/image.hpp"
#include "dforge/pipeline/blur_kernels.hpp"

namespace dforge {

// 2-D cross-correlation with reflect padding (edge sample not repeated),
// output clamped to [0,1]. Requires k.size <= min(height, width).
Image convolve(const Image& img, const Kernel& k);

// Index reflection used by convolve: -1 -> 1, n -> n - 2.
inline int reflect_index(int i, int n) noexcept {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
}

}  // namespace dforge
