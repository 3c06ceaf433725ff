#include <doctest.h>

#include <algorithm>

#include "dforge/degradation/sampler.hpp"
#include "dforge/error.hpp"
#include "dforge/pipeline/pipeline.hpp"
#include "oracles.hpp"

using namespace dforge;

namespace {

DegradationParams sample(Level level, std::uint64_t seed) {
    Rng rng(seed);
    return sample_params(default_schema(), level, rng);
}

std::vector<std::string> operations(const PipelineTrace& t) {
    std::vector<std::string> out;
    for (const auto& r : t.records) out.push_back(r.operation);
    return out;
}

}  // namespace

TEST_CASE("256x256 HR becomes 64x64 LR for every level") {
    const Image hr = oracle::random_image(256, 256, 1);
    for (Level level : {Level::S1, Level::S2, Level::S3}) {
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            const auto res = run_pipeline(hr, sample(level, seed));
            CHECK(res.lr.height() == 64);
            CHECK(res.lr.width() == 64);
            CHECK(res.lr.all_finite());
            const auto [lo, hi] = std::minmax_element(res.lr.data().begin(), res.lr.data().end());
            CHECK(*lo >= 0.0);
            CHECK(*hi <= 1.0);
        }
    }
}

TEST_CASE("S1 trace is one stage plus the final resize") {
    const Image hr = oracle::random_image(64, 64, 2);
    const auto res = run_pipeline(hr, sample(Level::S1, 4));
    CHECK(res.trace.stage_count() == 1);
    CHECK(operations(res.trace) == std::vector<std::string>{"blur", "resize", "noise", "jpeg", "final_resize"});
    CHECK(res.trace.records.back().height == 16);
}

TEST_CASE("S3 trace honours the operating order") {
    const Image hr = oracle::random_image(192, 192, 3);
    bool saw_rj = false, saw_jr = false;
    for (std::uint64_t seed = 0; seed < 40 && !(saw_rj && saw_jr); ++seed) {
        const auto p = sample(Level::S3, seed);
        const auto ops = operations(run_pipeline(hr, p).trace);
        const auto jpeg2 = std::find(ops.begin() + 4, ops.end(), "jpeg") - ops.begin();
        const auto fin = std::find(ops.begin(), ops.end(), "final_resize") - ops.begin();
        if (*p.stage2->jpeg.order == JpegOrder::resize_then_jpeg) {
            CHECK(fin < jpeg2);
            saw_rj = true;
        } else {
            CHECK(jpeg2 < fin);
            saw_jr = true;
        }
        const bool has_sinc = std::find(ops.begin(), ops.end(), "sinc") != ops.end();
        CHECK(has_sinc == p.stage2->blur.sinc_active);
        const auto blurs = std::count(ops.begin(), ops.end(), "blur");
        CHECK(blurs == 1 + (p.stage2->blur.active ? 1 : 0));
    }
    CHECK(saw_rj);
    CHECK(saw_jr);
}

TEST_CASE("pipeline is a pure function of image and parameters") {
    const Image hr = oracle::random_image(160, 200, 4);
    for (Level level : {Level::S1, Level::S2, Level::S3}) {
        const auto p = sample(level, 99);
        const auto a = run_pipeline(hr, p);
        const auto b = run_pipeline(hr, p);
        CHECK(a.lr == b.lr);
        CHECK(a.trace.records == b.trace.records);
        auto q = p;
        q.rng_seed += 1;
        CHECK_FALSE(run_pipeline(hr, q).lr == a.lr);
    }
}

TEST_CASE("non multiple-of-4 inputs are center cropped and recorded") {
    const Image hr = oracle::random_image(203, 181, 5);
    const auto res = run_pipeline(hr, sample(Level::S2, 6));
    CHECK(res.lr.height() == 50);
    CHECK(res.lr.width() == 45);
    REQUIRE_FALSE(res.trace.records.empty());
    CHECK(res.trace.records.front().operation == "crop");
    CHECK(res.trace.records.front().height == 200);
    CHECK(res.trace.records.front().width == 180);
}

TEST_CASE("stage two must match the level") {
    const Image hr = oracle::random_image(64, 64, 6);
    auto p = sample(Level::S1, 1);
    p.level = Level::S3;
    CHECK_THROWS_AS(run_pipeline(hr, p), Error);
}
