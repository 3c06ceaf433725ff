#include "dforge/engine/topology.hpp"

#include <map>
#include <set>
#include <utility>

#include "dforge/degradation/schema.hpp"
#include "dforge/error.hpp"

namespace dforge {

LayerSpec conv2d(std::string name, int in, int out, int kernel, int stride) {
    LayerSpec l;
    l.kind = LayerKind::conv2d;
    l.name = std::move(name);
    l.in_channels = in;
    l.out_channels = out;
    l.kernel = kernel;
    l.stride = stride;
    l.padding = kernel / 2;
    return l;
}

LayerSpec leaky_relu(float slope) {
    LayerSpec l;
    l.kind = LayerKind::leaky_relu;
    l.negative_slope = slope;
    return l;
}

LayerSpec prelu(std::string name, int channels) {
    LayerSpec l;
    l.kind = LayerKind::prelu;
    l.name = std::move(name);
    l.in_channels = l.out_channels = channels;
    return l;
}

LayerSpec pixel_shuffle(int factor) {
    LayerSpec l;
    l.kind = LayerKind::pixel_shuffle;
    l.upscale = factor;
    return l;
}

LayerSpec global_avg_pool() {
    LayerSpec l;
    l.kind = LayerKind::global_avg_pool;
    return l;
}

LayerSpec add_skip(std::string from) {
    LayerSpec l;
    l.kind = LayerKind::add_skip;
    l.skip_from = std::move(from);
    return l;
}

namespace {

[[noreturn]] void fail(const NetworkTopology& t, std::size_t i, const std::string& what) {
    throw Error(ErrorCode::topology_mismatch, t.name + " layer " + std::to_string(i) + ": " + what);
}

// Statically tracked feature shape: channels plus a spatial signature
// (upscale product, downscale product, pooled) for skip compatibility.
struct Signature {
    int channels;
    int up = 1;
    int down = 1;
    bool pooled = false;

    bool operator==(const Signature&) const = default;
};

}  // namespace

void NetworkTopology::validate() const {
    if (input_channels <= 0) throw Error(ErrorCode::topology_mismatch, name + ": input channels must be positive");
    Signature cur{input_channels};
    std::map<std::string, Signature> labels{{input_label, cur}};
    std::set<std::string> params;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerSpec& l = layers[i];
        switch (l.kind) {
            case LayerKind::conv2d:
                if (l.kernel <= 0 || l.kernel % 2 == 0) fail(*this, i, "conv kernel must be odd");
                if (l.stride < 1) fail(*this, i, "conv stride must be >= 1");
                if (l.padding < 0) fail(*this, i, "conv padding must be >= 0");
                if (l.in_channels != cur.channels) {
                    fail(*this, i, "conv expects " + std::to_string(l.in_channels) + " channels, receives " +
                                       std::to_string(cur.channels));
                }
                if (l.out_channels <= 0) fail(*this, i, "conv output channels must be positive");
                if (!params.insert(l.name).second) fail(*this, i, "duplicate parameter prefix " + l.name);
                cur.channels = l.out_channels;
                cur.down *= l.stride;
                break;
            case LayerKind::leaky_relu: break;
            case LayerKind::prelu:
                if (l.in_channels != cur.channels) fail(*this, i, "prelu channel count mismatch");
                if (!params.insert(l.name).second) fail(*this, i, "duplicate parameter prefix " + l.name);
                break;
            case LayerKind::pixel_shuffle:
                if (l.upscale < 2) fail(*this, i, "pixel shuffle factor must be >= 2");
                if (cur.channels % (l.upscale * l.upscale) != 0) {
                    fail(*this, i, "pixel shuffle needs channels divisible by factor^2");
                }
                cur.channels /= l.upscale * l.upscale;
                cur.up *= l.upscale;
                break;
            case LayerKind::global_avg_pool: cur.pooled = true; break;
            case LayerKind::add_skip: {
                auto it = labels.find(l.skip_from);
                if (it == labels.end()) fail(*this, i, "unknown skip source '" + l.skip_from + "'");
                if (!(it->second == cur)) fail(*this, i, "skip source '" + l.skip_from + "' has a different shape");
                break;
            }
        }
        if (!l.save_as.empty()) {
            if (labels.contains(l.save_as)) fail(*this, i, "duplicate label '" + l.save_as + "'");
            labels.emplace(l.save_as, cur);
        }
    }
}

int NetworkTopology::output_channels() const {
    int c = input_channels;
    for (const auto& l : layers) {
        if (l.kind == LayerKind::conv2d) c = l.out_channels;
        if (l.kind == LayerKind::pixel_shuffle) c /= l.upscale * l.upscale;
    }
    return c;
}

TensorMap NetworkTopology::parameter_shapes() const {
    TensorMap t;
    for (const auto& l : layers) {
        if (l.kind == LayerKind::conv2d) {
            const Shape w{l.out_channels, l.in_channels, l.kernel, l.kernel};
            t.add(l.name + ".weight", w, std::vector<float>(static_cast<std::size_t>(element_count(w))));
            t.add(l.name + ".bias", {l.out_channels}, std::vector<float>(l.out_channels));
        } else if (l.kind == LayerKind::prelu) {
            t.add(l.name + ".weight", {l.in_channels}, std::vector<float>(l.in_channels));
        }
    }
    return t;
}

NetworkTopology expert_topology() {
    constexpr int nf = expert_features;
    NetworkTopology t;
    t.name = "expert";
    t.clamp_output = true;
    auto& L = t.layers;
    L.push_back(conv2d("conv_first", 3, nf));
    L.push_back(leaky_relu(0.2f).saved("head"));
    std::string block_in = "head";
    for (int b = 0; b < expert_blocks; ++b) {
        const std::string prefix = "body." + std::to_string(b);
        L.push_back(conv2d(prefix + ".conv1", nf, nf));
        L.push_back(leaky_relu(0.2f));
        L.push_back(conv2d(prefix + ".conv2", nf, nf));
        const std::string label = "block" + std::to_string(b);
        L.push_back(add_skip(block_in).saved(label));
        block_in = label;
    }
    L.push_back(add_skip("head"));
    L.push_back(conv2d("upconv1", nf, nf * 4));
    L.push_back(pixel_shuffle(2));
    L.push_back(leaky_relu(0.2f));
    L.push_back(conv2d("upconv2", nf, nf * 4));
    L.push_back(pixel_shuffle(2));
    L.push_back(leaky_relu(0.2f));
    L.push_back(conv2d("conv_hr", nf, nf));
    L.push_back(leaky_relu(0.2f));
    L.push_back(conv2d("conv_last", nf, 3));
    return t;
}

NetworkTopology predictor_topology() {
    NetworkTopology t;
    t.name = "predictor";
    auto& L = t.layers;
    // (in, out, stride) per conv; sized for ~0.47M parameters and ~18 GMac
    // at 256x256 together with the weighting net.
    constexpr std::array<std::array<int, 3>, 6> plan{{
        {3, 64, 1}, {64, 128, 1}, {128, 128, 1}, {128, 128, 2}, {128, 64, 1}, {64, vector_size, 1},
    }};
    for (std::size_t i = 0; i < plan.size(); ++i) {
        L.push_back(conv2d("conv" + std::to_string(i), plan[i][0], plan[i][1], 3, plan[i][2]));
        if (i + 1 < plan.size()) L.push_back(leaky_relu(0.2f));
    }
    L.push_back(global_avg_pool());
    return t;
}

}  // namespace dforge
