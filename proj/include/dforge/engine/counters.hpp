#pragma once

#include <cstdint>
#include <vector>

#include "dforge/engine/topology.hpp"
#include "dforge/moe/weighting.hpp"

namespace dforge {

std::int64_t count_params(const NetworkTopology& topology);

// Multiply-accumulates of each layer for an H x W input; only convolutions
// contribute (k^2 * C_in * C_out * H_out * W_out).
std::vector<std::int64_t> layer_macs(const NetworkTopology& topology, int height, int width);

// Total in GMac (1e9 MAC).
double count_flops(const NetworkTopology& topology, int height, int width);

// Whole-model accounting: N experts plus predictor and weighting net.
struct CostReport {
    int experts = 0;
    std::int64_t expert_params = 0;
    std::int64_t predictor_params = 0;
    std::int64_t weighting_params = 0;
    double expert_gmac = 0.0;
    double predictor_gmac = 0.0;
    double weighting_gmac = 0.0;
    // Parameter fusion cost, reported separately from the forward totals.
    double mixing_gmac = 0.0;

    std::int64_t total_params() const noexcept {
        return experts * expert_params + predictor_params + weighting_params;
    }
    double total_gmac() const noexcept { return expert_gmac + predictor_gmac + weighting_gmac; }
};

CostReport cost_report(int height, int width, int experts = 5, int weighting_hidden_width = weighting_hidden);

}  // namespace dforge
