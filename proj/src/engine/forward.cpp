#include "dforge/engine/forward.hpp"

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dforge/error.hpp"
#include "dforge/simd/kernels.hpp"

namespace dforge {

FeatureMap to_feature_map(const Image& img) {
    FeatureMap f(Image::channels, img.height(), img.width());
    std::transform(img.data().begin(), img.data().end(), f.data.begin(),
                   [](double v) { return static_cast<float>(v); });
    return f;
}

void check_parameters(const NetworkTopology& topology, const TensorMap& params) {
    const TensorMap expected = topology.parameter_shapes();
    for (const Tensor& e : expected.entries()) {
        const Tensor* got = params.find(e.name);
        if (!got) throw Error(ErrorCode::topology_mismatch, topology.name + ": missing tensor " + e.name);
        if (got->shape != e.shape) {
            throw Error(ErrorCode::topology_mismatch, topology.name + ": tensor " + e.name + " has shape " +
                                                          shape_string(got->shape) + ", expected " +
                                                          shape_string(e.shape));
        }
    }
    for (const Tensor& t : params.entries()) {
        if (!expected.find(t.name)) {
            throw Error(ErrorCode::topology_mismatch, topology.name + ": unexpected tensor " + t.name);
        }
    }
}

FeatureMap conv2d_forward(const FeatureMap& in, const Tensor& weight, const Tensor* bias, int stride, int padding) {
    const int cout = static_cast<int>(weight.shape[0]);
    const int cin = static_cast<int>(weight.shape[1]);
    const int k = static_cast<int>(weight.shape[2]);
    if (cin != in.channels) {
        throw Error(ErrorCode::shape_mismatch, weight.name + ": expects " + std::to_string(cin) +
                                                   " input channels, got " + std::to_string(in.channels));
    }
    const int ph = in.height + 2 * padding;
    const int pw = in.width + 2 * padding;
    const int oh = (ph - k) / stride + 1;
    const int ow = (pw - k) / stride + 1;
    if (oh < 1 || ow < 1) throw Error(ErrorCode::dimension, weight.name + ": input smaller than kernel");

    std::vector<float> padded;
    const float* src = in.data.data();
    if (padding > 0) {
        padded.assign(static_cast<std::size_t>(cin) * ph * pw, 0.0f);
        for (int c = 0; c < cin; ++c)
            for (int y = 0; y < in.height; ++y) {
                const float* row = in.data.data() + (static_cast<std::size_t>(c) * in.height + y) * in.width;
                std::copy(row, row + in.width,
                          padded.data() + (static_cast<std::size_t>(c) * ph + y + padding) * pw + padding);
            }
        src = padded.data();
    }

    FeatureMap out(cout, oh, ow);
    simd::Conv2dArgs args;
    args.input = src;
    args.in_channels = cin;
    args.padded_height = ph;
    args.padded_width = pw;
    args.weight = weight.values.data();
    args.bias = bias ? bias->values.data() : nullptr;
    args.out_channels = cout;
    args.kernel = k;
    args.stride = stride;
    args.output = out.data.data();
    args.out_height = oh;
    args.out_width = ow;

    // Output channels are independent, so any partition gives identical bits.
    const auto& kern = simd::kernels();
    constexpr int block = 4;
    const int blocks = (cout + block - 1) / block;
    tbb::parallel_for(tbb::blocked_range<int>(0, blocks), [&](const tbb::blocked_range<int>& r) {
        kern.conv2d_f32(args, r.begin() * block, std::min(cout, r.end() * block));
    });
    return out;
}

FeatureMap pixel_shuffle_forward(const FeatureMap& in, int r) {
    if (in.channels % (r * r) != 0) throw Error(ErrorCode::shape_mismatch, "pixel shuffle channel mismatch");
    FeatureMap out(in.channels / (r * r), in.height * r, in.width * r);
    for (int c = 0; c < out.channels; ++c)
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                const int src_c = c * r * r + i * r + j;
                for (int y = 0; y < in.height; ++y)
                    for (int x = 0; x < in.width; ++x) out.at(c, y * r + i, x * r + j) = in.at(src_c, y, x);
            }
    return out;
}

namespace {

void require_finite(const FeatureMap& f, const std::string& where) {
    if (!std::all_of(f.data.begin(), f.data.end(), [](float v) { return std::isfinite(v); })) {
        throw Error(ErrorCode::numeric_fault, "non-finite activation after " + where);
    }
}

}  // namespace

FeatureMap forward(const NetworkTopology& topology, const TensorMap& params, const FeatureMap& input) {
    topology.validate();
    check_parameters(topology, params);
    if (input.channels != topology.input_channels) {
        throw Error(ErrorCode::shape_mismatch, topology.name + ": expects " +
                                                   std::to_string(topology.input_channels) + " input channels");
    }
    const auto& kern = simd::kernels();
    std::unordered_map<std::string, FeatureMap> saved{{input_label, input}};
    FeatureMap cur = input;
    for (const LayerSpec& l : topology.layers) {
        switch (l.kind) {
            case LayerKind::conv2d:
                cur = conv2d_forward(cur, params.at(l.name + ".weight"), params.find(l.name + ".bias"), l.stride,
                                     l.padding);
                require_finite(cur, l.name);
                break;
            case LayerKind::leaky_relu: kern.leaky_relu_f32(cur.data.data(), cur.data.size(), l.negative_slope); break;
            case LayerKind::prelu: {
                const auto& slope = params.at(l.name + ".weight").values;
                const std::size_t plane = static_cast<std::size_t>(cur.height) * cur.width;
                for (int c = 0; c < cur.channels; ++c) {
                    kern.leaky_relu_f32(cur.data.data() + c * plane, plane, slope[c]);
                }
                break;
            }
            case LayerKind::pixel_shuffle: cur = pixel_shuffle_forward(cur, l.upscale); break;
            case LayerKind::global_avg_pool: {
                FeatureMap pooled(cur.channels, 1, 1);
                const std::size_t plane = static_cast<std::size_t>(cur.height) * cur.width;
                for (int c = 0; c < cur.channels; ++c) {
                    double sum = 0.0;
                    for (std::size_t i = 0; i < plane; ++i) sum += cur.data[c * plane + i];
                    pooled.data[c] = static_cast<float>(sum / static_cast<double>(plane));
                }
                cur = std::move(pooled);
                break;
            }
            case LayerKind::add_skip: {
                const FeatureMap& src = saved.at(l.skip_from);
                if (src.channels != cur.channels || src.height != cur.height || src.width != cur.width) {
                    throw Error(ErrorCode::shape_mismatch, topology.name + ": skip from '" + l.skip_from +
                                                               "' has a different shape");
                }
                for (std::size_t i = 0; i < cur.data.size(); ++i) cur.data[i] += src.data[i];
                break;
            }
        }
        if (!l.save_as.empty()) saved[l.save_as] = cur;
    }
    return cur;
}

Image forward_image(const NetworkTopology& topology, const TensorMap& params, const Image& img) {
    const FeatureMap out = forward(topology, params, to_feature_map(img));
    if (out.channels != Image::channels) {
        throw Error(ErrorCode::shape_mismatch, topology.name + " does not produce a 3-channel image");
    }
    Image result(out.height, out.width);
    std::transform(out.data.begin(), out.data.end(), result.data().begin(),
                   [](float v) { return static_cast<double>(v); });
    if (topology.clamp_output) result.clamp01();
    return result;
}

std::vector<double> forward_vector(const NetworkTopology& topology, const TensorMap& params, const Image& img) {
    const FeatureMap out = forward(topology, params, to_feature_map(img));
    if (out.height != 1 || out.width != 1) {
        throw Error(ErrorCode::shape_mismatch, topology.name + " does not produce a vector");
    }
    return {out.data.begin(), out.data.end()};
}

}  // namespace dforge
