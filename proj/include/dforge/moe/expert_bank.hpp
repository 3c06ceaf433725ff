#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dforge/moe/tensor_map.hpp"

namespace dforge {

inline constexpr int default_expert_count = 5;

// N congruent parameter sets (same names, same shapes). Immutable after
// construction.
class ExpertBank {
public:
    // Throws Error(shape_mismatch) naming the first incongruent tensor.
    explicit ExpertBank(std::vector<TensorMap> experts);

    int size() const noexcept { return static_cast<int>(experts_.size()); }
    const TensorMap& expert(int i) const { return experts_.at(static_cast<std::size_t>(i)); }
    const std::vector<TensorMap>& experts() const noexcept { return experts_; }

    // Parameters of one expert.
    std::int64_t parameter_count() const noexcept { return experts_.front().parameter_count(); }

    // Scalar multiply-adds performed by mix(): N x parameter_count().
    std::int64_t mixing_macs() const noexcept { return size() * parameter_count(); }

    std::uint64_t fingerprint() const noexcept;

private:
    std::vector<TensorMap> experts_;
};

// Elementwise sum_i a_i * expert_i over every tensor. Throws
// Error(shape_mismatch) when a.size() != N.
TensorMap mix_params(const ExpertBank& bank, std::span<const double> a);

}  // namespace dforge
