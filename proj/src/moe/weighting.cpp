#include "dforge/moe/weighting.hpp"

#include <algorithm>
#include <cmath>

#include "dforge/error.hpp"

namespace dforge {

WeightingNet WeightingNet::from_tensors(const TensorMap& t) {
    const Tensor& w1 = t.at("fc1.weight");
    const Tensor& b1 = t.at("fc1.bias");
    const Tensor& w2 = t.at("fc2.weight");
    const Tensor& b2 = t.at("fc2.bias");
    if (w1.shape.size() != 2 || w2.shape.size() != 2 || b1.shape.size() != 1 || b2.shape.size() != 1 ||
        b1.shape[0] != w1.shape[0] || w2.shape[1] != w1.shape[0] || b2.shape[0] != w2.shape[0]) {
        throw Error(ErrorCode::shape_mismatch, "weighting net tensors have inconsistent shapes");
    }
    WeightingNet net;
    net.hidden = static_cast<int>(w1.shape[0]);
    net.inputs = static_cast<int>(w1.shape[1]);
    net.outputs = static_cast<int>(w2.shape[0]);
    net.w1 = w1.values;
    net.b1 = b1.values;
    net.w2 = w2.values;
    net.b2 = b2.values;
    return net;
}

TensorMap WeightingNet::to_tensors() const {
    TensorMap t;
    t.add("fc1.weight", {hidden, inputs}, w1);
    t.add("fc1.bias", {hidden}, b1);
    t.add("fc2.weight", {outputs, hidden}, w2);
    t.add("fc2.bias", {outputs}, b2);
    return t;
}

TensorMap WeightingNet::shapes(int inputs, int hidden, int outputs) {
    TensorMap t;
    t.add("fc1.weight", {hidden, inputs}, std::vector<float>(static_cast<std::size_t>(hidden) * inputs));
    t.add("fc1.bias", {hidden}, std::vector<float>(hidden));
    t.add("fc2.weight", {outputs, hidden}, std::vector<float>(static_cast<std::size_t>(outputs) * hidden));
    t.add("fc2.bias", {outputs}, std::vector<float>(outputs));
    return t;
}

std::int64_t WeightingNet::parameter_count() const noexcept {
    return static_cast<std::int64_t>(hidden) * inputs + hidden + static_cast<std::int64_t>(outputs) * hidden +
           outputs;
}

std::vector<double> compute_weights(std::span<const double> v_hat, const WeightingNet& net) {
    if (static_cast<int>(v_hat.size()) != net.inputs) {
        throw Error(ErrorCode::invalid_input, "weighting input has " + std::to_string(v_hat.size()) +
                                                  " entries, expected " + std::to_string(net.inputs));
    }
    if (!std::all_of(v_hat.begin(), v_hat.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorCode::invalid_input, "weighting input contains non-finite values");
    }
    std::vector<double> hidden(net.hidden);
    for (int h = 0; h < net.hidden; ++h) {
        double acc = net.b1[h];
        const float* row = net.w1.data() + static_cast<std::size_t>(h) * net.inputs;
        for (int i = 0; i < net.inputs; ++i) acc += static_cast<double>(row[i]) * v_hat[i];
        hidden[h] = std::max(acc, 0.0);
    }
    std::vector<double> a(net.outputs);
    for (int o = 0; o < net.outputs; ++o) {
        double acc = net.b2[o];
        const float* row = net.w2.data() + static_cast<std::size_t>(o) * net.hidden;
        for (int h = 0; h < net.hidden; ++h) acc += static_cast<double>(row[h]) * hidden[h];
        a[o] = acc;
    }
    return a;
}

}  // namespace dforge
