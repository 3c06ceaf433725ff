#include "dforge/engine/counters.hpp"

#include <numeric>

#include "dforge/degradation/schema.hpp"
#include "dforge/error.hpp"

namespace dforge {

std::int64_t count_params(const NetworkTopology& topology) {
    std::int64_t n = 0;
    for (const auto& l : topology.layers) {
        if (l.kind == LayerKind::conv2d) {
            n += static_cast<std::int64_t>(l.out_channels) * l.in_channels * l.kernel * l.kernel + l.out_channels;
        } else if (l.kind == LayerKind::prelu) {
            n += l.in_channels;
        }
    }
    return n;
}

std::vector<std::int64_t> layer_macs(const NetworkTopology& topology, int height, int width) {
    if (height <= 0 || width <= 0) throw Error(ErrorCode::dimension, "flops dims must be positive");
    std::vector<std::int64_t> macs;
    macs.reserve(topology.layers.size());
    std::int64_t h = height;
    std::int64_t w = width;
    for (const auto& l : topology.layers) {
        std::int64_t m = 0;
        switch (l.kind) {
            case LayerKind::conv2d:
                h = (h + 2 * l.padding - l.kernel) / l.stride + 1;
                w = (w + 2 * l.padding - l.kernel) / l.stride + 1;
                m = static_cast<std::int64_t>(l.kernel) * l.kernel * l.in_channels * l.out_channels * h * w;
                break;
            case LayerKind::pixel_shuffle:
                h *= l.upscale;
                w *= l.upscale;
                break;
            case LayerKind::global_avg_pool: h = w = 1; break;
            default: break;
        }
        macs.push_back(m);
    }
    return macs;
}

double count_flops(const NetworkTopology& topology, int height, int width) {
    const auto macs = layer_macs(topology, height, width);
    return static_cast<double>(std::accumulate(macs.begin(), macs.end(), std::int64_t{0})) / 1e9;
}

CostReport cost_report(int height, int width, int experts, int weighting_hidden_width) {
    const auto expert = expert_topology();
    const auto predictor = predictor_topology();
    WeightingNet a;
    a.hidden = weighting_hidden_width;
    a.inputs = vector_size;
    a.outputs = experts;

    CostReport r;
    r.experts = experts;
    r.expert_params = count_params(expert);
    r.predictor_params = count_params(predictor);
    r.weighting_params = a.parameter_count();
    r.expert_gmac = count_flops(expert, height, width);
    r.predictor_gmac = count_flops(predictor, height, width);
    r.weighting_gmac = static_cast<double>(a.macs()) / 1e9;
    r.mixing_gmac = static_cast<double>(experts) * static_cast<double>(r.expert_params) / 1e9;
    return r;
}

}  // namespace dforge
