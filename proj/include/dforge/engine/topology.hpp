#pragma once

#include <string>
#include <vector>

#include "dforge/moe/tensor_map.hpp"

namespace dforge {

enum class LayerKind { conv2d, leaky_relu, prelu, pixel_shuffle, global_avg_pool, add_skip };

struct LayerSpec {
    LayerKind kind = LayerKind::conv2d;
    std::string name;  // parameter prefix for conv2d / prelu
    int in_channels = 0;
    int out_channels = 0;
    int kernel = 3;
    int stride = 1;
    int padding = 1;
    float negative_slope = 0.2f;
    int upscale = 2;
    std::string skip_from;  // add_skip source label
    std::string save_as;    // label for this layer's output, optional

    LayerSpec saved(std::string label) const {
        LayerSpec copy = *this;
        copy.save_as = std::move(label);
        return copy;
    }
};

LayerSpec conv2d(std::string name, int in, int out, int kernel = 3, int stride = 1);
LayerSpec leaky_relu(float slope = 0.2f);
LayerSpec prelu(std::string name, int channels);
LayerSpec pixel_shuffle(int factor);
LayerSpec global_avg_pool();
LayerSpec add_skip(std::string from);

// Label reserved for the network input.
inline constexpr const char* input_label = "input";

struct NetworkTopology {
    std::string name;
    int input_channels = 3;
    std::vector<LayerSpec> layers;
    bool clamp_output = false;

    // Channel chain, kernel/stride/factor constraints, skip sources and
    // unique parameter names. Throws Error(topology_mismatch).
    void validate() const;

    // Channels produced by the last layer.
    int output_channels() const;

    // Every learnable tensor as a zero-filled TensorMap, in layer order.
    TensorMap parameter_shapes() const;
};

// SRResNet-style x4 expert without batch norm: head conv, 16 residual
// blocks, long skip, two pixel-shuffle x2 upsamplers, two tail convs.
NetworkTopology expert_topology();

// Six 3x3 convs with leaky ReLU after the first five, then global average
// pooling to a 33-vector.
NetworkTopology predictor_topology();

inline constexpr int expert_features = 64;
inline constexpr int expert_blocks = 16;

}  // namespace dforge
