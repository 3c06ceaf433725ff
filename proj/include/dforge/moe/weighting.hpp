#pragma once

#include <span>
#include <vector>

#include "dforge/moe/tensor_map.hpp"

namespace dforge {

inline constexpr int weighting_hidden = 64;

// a = W2 relu(W1 v + b1) + b2, no output squashing.
struct WeightingNet {
    int inputs = 33;
    int hidden = weighting_hidden;
    int outputs = 5;
    std::vector<float> w1;  // hidden x inputs, row-major
    std::vector<float> b1;  // hidden
    std::vector<float> w2;  // outputs x hidden
    std::vector<float> b2;  // outputs

    // Tensor names: fc1.weight [h, n], fc1.bias [h], fc2.weight [N, h], fc2.bias [N].
    static WeightingNet from_tensors(const TensorMap& tensors);
    TensorMap to_tensors() const;
    static TensorMap shapes(int inputs, int hidden, int outputs);

    std::int64_t parameter_count() const noexcept;
    std::int64_t macs() const noexcept { return static_cast<std::int64_t>(hidden) * (inputs + outputs); }
};

std::vector<double> compute_weights(std::span<const double> v_hat, const WeightingNet& net);

}  // namespace dforge
