#include <doctest.h>

#include <cmath>
#include <random>

#include <tbb/global_control.h>

#include "dforge/engine/forward.hpp"
#include "dforge/engine/model.hpp"
#include "dforge/engine/super_resolve.hpp"
#include "dforge/engine/topology.hpp"
#include "dforge/error.hpp"
#include "oracles.hpp"

using namespace dforge;

namespace {

double max_diff(const Image& a, const Image& b) {
    REQUIRE(a.height() == b.height());
    REQUIRE(a.width() == b.width());
    double d = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

double max_diff(const FeatureMap& a, const FeatureMap& b) {
    REQUIRE(a.data.size() == b.data.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) d = std::max(d, double(std::abs(a.data[i] - b.data[i])));
    return d;
}

// Fixture experts with a small random spread so their outputs differ.
const Model& fixture() {
    static const Model m = make_fixture_model(2024);
    return m;
}

}  // namespace

TEST_CASE("standard topologies validate") {
    CHECK_NOTHROW(expert_topology().validate());
    CHECK_NOTHROW(predictor_topology().validate());
    CHECK(expert_topology().output_channels() == 3);
    CHECK(predictor_topology().output_channels() == 33);
}

TEST_CASE("invalid topologies are rejected") {
    NetworkTopology t{"bad", 3, {conv2d("a", 3, 8), conv2d("b", 4, 8)}, false};
    CHECK_THROWS_AS(t.validate(), Error);
    NetworkTopology even{"even", 3, {conv2d("a", 3, 8, 4)}, false};
    CHECK_THROWS_AS(even.validate(), Error);
    NetworkTopology shuffle{"ps", 3, {conv2d("a", 3, 6), pixel_shuffle(2)}, false};
    CHECK_THROWS_AS(shuffle.validate(), Error);
    NetworkTopology skip{"skip", 3, {conv2d("a", 3, 8), add_skip("nowhere")}, false};
    CHECK_THROWS_AS(skip.validate(), Error);
    NetworkTopology dup{"dup", 3, {conv2d("a", 3, 3), conv2d("a", 3, 3)}, false};
    CHECK_THROWS_AS(dup.validate(), Error);
}

TEST_CASE("pixel shuffle moves channels into space") {
    FeatureMap in(4, 1, 1);
    in.data = {1, 2, 3, 4};
    const auto out = pixel_shuffle_forward(in, 2);
    CHECK(out.channels == 1);
    CHECK(out.height == 2);
    CHECK(out.width == 2);
    CHECK(out.data == std::vector<float>{1, 2, 3, 4});

    const auto big = oracle::random_features(12, 3, 5, 1);
    const auto s = pixel_shuffle_forward(big, 2);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 3; ++y)
            for (int x = 0; x < 5; ++x)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) CHECK(s.at(c, 2 * y + i, 2 * x + j) == big.at(c * 4 + i * 2 + j, y, x));
}

TEST_CASE("zero parameters give zero outputs") {
    const Model zero = make_fixture_model(0, 5, true);
    const Image img = oracle::random_image(16, 16, 3);
    const Image sr = forward_image(expert_topology(), zero.bank.expert(0), img);
    CHECK(sr.height() == 64);
    for (double v : sr.data()) CHECK(v == 0.0);
    const auto v = forward_vector(predictor_topology(), zero.predictor, img);
    REQUIRE(v.size() == 33);
    for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("expert scales by four on any size and predictor emits 33 values") {
    const Model& m = fixture();
    for (auto [h, w] : {std::pair{5, 7}, std::pair{8, 8}, std::pair{3, 11}}) {
        const Image img = oracle::random_image(h, w, 4);
        const Image sr = forward_image(expert_topology(), m.bank.expert(1), img);
        CHECK(sr.height() == 4 * h);
        CHECK(sr.width() == 4 * w);
        for (double v : sr.data()) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    for (int size : {16, 23, 40}) {
        CHECK(forward_vector(predictor_topology(), m.predictor, oracle::random_image(size, size, 5)).size() == 33);
    }
}

TEST_CASE("parameter checks name the offending tensor") {
    TensorMap params = fixture().bank.expert(0);
    TensorMap missing;
    for (const auto& t : params.entries()) {
        if (t.name != "body.3.conv2.bias") missing.add(t);
    }
    try {
        check_parameters(expert_topology(), missing);
        FAIL("expected topology mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::topology_mismatch);
        CHECK(std::string(e.what()).find("body.3.conv2.bias") != std::string::npos);
    }
    TensorMap extra = params;
    extra.add("stray", {1}, {0.0f});
    CHECK_THROWS_AS(check_parameters(expert_topology(), extra), Error);
}

TEST_CASE("non-finite activations raise a numeric fault") {
    TensorMap params = fixture().bank.expert(0);
    params.find("conv_first.bias")->values[3] = std::numeric_limits<float>::infinity();
    try {
        forward_image(expert_topology(), params, oracle::random_image(6, 6, 1));
        FAIL("expected numeric fault");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::numeric_fault);
    }
}

TEST_CASE("forward is deterministic across runs and thread counts") {
    const Image img = oracle::random_image(9, 10, 6);
    const Image a = forward_image(expert_topology(), fixture().bank.expert(2), img);
    Image b;
    {
        tbb::global_control one(tbb::global_control::max_allowed_parallelism, 1);
        b = forward_image(expert_topology(), fixture().bank.expert(2), img);
    }
    CHECK(a == b);
    CHECK(a == forward_image(expert_topology(), fixture().bank.expert(2), img));
}

TEST_CASE("random valid topologies run without shape errors") {
    std::mt19937_64 rng(12);
    int ran = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<int> pick(0, 4), chans(1, 6);
        std::vector<LayerSpec> layers;
        int c = 3, n = 0, up = 0;
        const int depth = 2 + static_cast<int>(rng() % 6);
        for (int i = 0; i < depth; ++i) {
            switch (pick(rng)) {
                case 0: {
                    const int out = chans(rng);
                    layers.push_back(conv2d("c" + std::to_string(n++), c, out, rng() % 2 ? 3 : 1));
                    c = out;
                    break;
                }
                case 1: layers.push_back(leaky_relu(0.1f)); break;
                case 2: layers.push_back(prelu("p" + std::to_string(n++), c)); break;
                case 3:
                    if (up < 1) {
                        layers.push_back(conv2d("u" + std::to_string(n++), c, 4 * c));
                        layers.push_back(pixel_shuffle(2));
                        ++up;
                    }
                    break;
                case 4: {
                    const int out = chans(rng);
                    layers.push_back(conv2d("s" + std::to_string(n++), c, out, 3, 2));
                    c = out;
                    break;
                }
            }
        }
        NetworkTopology topo{"fuzz", 3, layers, false};
        try {
            topo.validate();
        } catch (const Error&) {
            continue;
        }
        const auto params = oracle::random_params(topo.parameter_shapes(), static_cast<std::uint64_t>(trial), 0.3);
        const auto out = forward(topo, params, to_feature_map(oracle::random_image(12, 12, 2)));
        CHECK(out.channels == topo.output_channels());
        ++ran;
    }
    CHECK(ran > 30);
}

TEST_CASE("one-hot mixing reproduces each expert's output exactly") {
    const Model& m = fixture();
    const Image img = oracle::random_image(8, 8, 7);
    for (int i = 0; i < m.bank.size(); ++i) {
        std::vector<double> a(static_cast<std::size_t>(m.bank.size()), 0.0);
        a[static_cast<std::size_t>(i)] = 1.0;
        const Image mixed = forward_image(expert_topology(), mix_params(m.bank, a), img);
        CHECK(mixed == forward_image(expert_topology(), m.bank.expert(i), img));
    }
}

TEST_CASE("a single linear layer mixes like its outputs") {
    const NetworkTopology linear{"linear", 3, {conv2d("conv", 3, 5)}, false};
    std::vector<TensorMap> experts;
    for (std::uint64_t i = 0; i < 4; ++i) experts.push_back(oracle::random_params(linear.parameter_shapes(), 10 * i, 1.0));
    const ExpertBank bank(experts);
    const std::vector<double> a{0.4, -0.3, 1.2, 0.15};
    const auto in = to_feature_map(oracle::random_image(12, 12, 8));
    const auto mixed = forward(linear, mix_params(bank, a), in);
    FeatureMap blend(5, 12, 12);
    for (int i = 0; i < 4; ++i) {
        const auto out = forward(linear, bank.expert(i), in);
        for (std::size_t k = 0; k < out.data.size(); ++k) blend.data[k] += static_cast<float>(a[i] * out.data[k]);
    }
    CHECK(max_diff(mixed, blend) <= 1e-5);
}

TEST_CASE("a nonlinearity between two convs breaks output averaging") {
    const NetworkTopology deep{"deep", 3, {conv2d("c1", 3, 8), leaky_relu(0.2f), conv2d("c2", 8, 3)}, false};
    const ExpertBank bank({oracle::random_params(deep.parameter_shapes(), 1, 1.0),
                           oracle::random_params(deep.parameter_shapes(), 100, 1.0)});
    const std::vector<double> half{0.5, 0.5};
    const auto in = to_feature_map(oracle::random_image(10, 10, 9));
    const auto mixed = forward(deep, mix_params(bank, half), in);
    const auto o1 = forward(deep, bank.expert(0), in), o2 = forward(deep, bank.expert(1), in);
    FeatureMap avg(3, 10, 10);
    for (std::size_t k = 0; k < avg.data.size(); ++k) avg.data[k] = 0.5f * (o1.data[k] + o2.data[k]);
    CHECK(max_diff(mixed, avg) > 1e-3);
}

TEST_CASE("super_resolve shapes and override") {
    const Model& m = fixture();
    const Image lr = oracle::random_image(48, 48, 10);
    const auto res = super_resolve(lr, m);
    CHECK(res.sr.height() == 192);
    CHECK(res.sr.width() == 192);
    CHECK(res.v_hat.size() == 33);
    CHECK(res.a.size() == 5);
    const auto same = super_resolve(lr, m, std::span<const double>(res.v_hat));
    CHECK(same.sr == res.sr);
    CHECK(same.a == res.a);
    std::vector<double> bad(32, 0.0);
    CHECK_THROWS_AS(super_resolve(lr, m, std::span<const double>(bad)), Error);
}

TEST_CASE("identical experts blended to sum one match the single expert") {
    const Model& m = fixture();
    const ExpertBank copies(std::vector<TensorMap>(5, m.bank.expert(0)));
    WeightingNet net = m.weighting;
    // a = b2 for every input; choose a non-uniform split that sums to 1.
    std::fill(net.w2.begin(), net.w2.end(), 0.0f);
    net.b2 = {0.1f, 0.4f, 0.2f, 0.25f, 0.05f};
    const Image lr = oracle::random_image(12, 12, 11);
    const auto res = super_resolve(lr, copies, m.predictor, net);
    const Image single = forward_image(expert_topology(), m.bank.expert(0), lr);
    CHECK(max_diff(res.sr, single) <= 1e-5);
}
