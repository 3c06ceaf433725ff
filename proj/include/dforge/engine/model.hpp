#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dforge/moe/expert_bank.hpp"
#include "dforge/moe/tensor_map.hpp"
#include "dforge/moe/weighting.hpp"

namespace dforge {

// Weight file layout (little-endian throughout):
//   "DASRW1"                       6 bytes
//   version                        u32 (= 1)
//   tensor count                   u32
//   per tensor:
//     name length, name bytes      u32, UTF-8
//     element type                 u8 (1 = float32)
//     rank, dims                   u32, rank x u64
//     values                       element count x f32
//   checksum                       u64, CRC-64/XZ of every preceding byte
inline constexpr char weight_magic[6] = {'D', 'A', 'S', 'R', 'W', '1'};
inline constexpr std::uint32_t weight_format_version = 1;
inline constexpr std::uint8_t weight_dtype_f32 = 1;

std::vector<std::uint8_t> serialize_weights(const TensorMap& tensors);
// Throws Error(corrupt_weights) on bad magic, truncation or checksum failure.
TensorMap deserialize_weights(std::span<const std::uint8_t> bytes);

void save_weights(const TensorMap& tensors, const std::filesystem::path& path);
TensorMap load_weights(const std::filesystem::path& path);

// Everything inference needs: expert bank, degradation predictor and the
// weighting net. Tensor names in the flat file are "expert.<i>.<name>",
// "predictor.<name>" and "weighting.<name>".
struct Model {
    ExpertBank bank;
    TensorMap predictor;
    WeightingNet weighting;

    // Throws Error(topology_mismatch) when tensors do not fit the topologies.
    static Model from_tensors(const TensorMap& tensors);
    TensorMap to_tensors() const;

    std::uint64_t fingerprint() const;
};

Model load_model(const std::filesystem::path& path);

// Seeded random weights sized for the standard topologies. With `zero`,
// every tensor is zero.
Model make_fixture_model(std::uint64_t seed, int experts = default_expert_count, bool zero = false);

}  // namespace dforge
