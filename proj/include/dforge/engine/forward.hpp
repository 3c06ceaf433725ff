#pragma once

#include <vector>

#include "dforge/engine/topology.hpp"
#include "dforge/image.hpp"
#include "dforge/moe/tensor_map.hpp"

namespace dforge {

// CHW float activations.
struct FeatureMap {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<float> data;

    FeatureMap() = default;
    FeatureMap(int c, int h, int w) : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w) {}

    float& at(int c, int y, int x) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
    float at(int c, int y, int x) const { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }

    friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

FeatureMap to_feature_map(const Image& img);

// Throws Error(topology_mismatch) on a missing, unexpected or misshaped tensor.
void check_parameters(const NetworkTopology& topology, const TensorMap& params);

// Deterministic forward pass. Convolutions use zero padding k/2. Throws
// Error(numeric_fault) if any convolution produces a non-finite value.
FeatureMap forward(const NetworkTopology& topology, const TensorMap& params, const FeatureMap& input);

// Image-to-image networks (3 output channels); clamps when the topology asks.
Image forward_image(const NetworkTopology& topology, const TensorMap& params, const Image& img);

// Networks ending in global average pooling.
std::vector<double> forward_vector(const NetworkTopology& topology, const TensorMap& params, const Image& img);

// Layer primitives, exposed for tests.
FeatureMap conv2d_forward(const FeatureMap& in, const Tensor& weight, const Tensor* bias, int stride, int padding);
FeatureMap pixel_shuffle_forward(const FeatureMap& in, int factor);

}  // namespace dforge
