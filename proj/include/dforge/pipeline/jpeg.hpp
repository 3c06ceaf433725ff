#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dforge/image.hpp"

namespace dforge {

// Baseline JPEG with 4:2:0 chroma subsampling and the standard IJG
// quantization tables scaled for `quality`.
std::vector<std::uint8_t> encode_jpeg(const Image& img, int quality);
Image decode_jpeg(std::span<const std::uint8_t> bytes);

// Encode then decode. quality must lie in [30, 95].
Image jpeg_roundtrip(const Image& img, int quality);

}  // namespace dforge
