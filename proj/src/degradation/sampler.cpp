#include "dforge/degradation/sampler.hpp"

#include <cmath>

#include "dforge/degradation/codec.hpp"
#include "dforge/error.hpp"

namespace dforge {

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool bernoulli(Rng& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

int categorical(Rng& rng, std::span<const double> probs) {
    const double u = uniform(rng, 0.0, 1.0);
    double cumulative = 0.0;
    int last_nonzero = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last_nonzero = static_cast<int>(i);
        cumulative += probs[i];
        if (u < cumulative) return static_cast<int>(i);
    }
    return last_nonzero;
}

Level sample_level(const DegradationSchema& schema, Rng& rng) {
    return static_cast<Level>(categorical(rng, schema.level_probs));
}

namespace {

void sample_gaussian_blur(const DegradationSchema& schema, const StageSchema& st, Rng& rng, BlurSpec& blur) {
    blur.active = true;
    blur.kernel_half = uniform_int(rng, static_cast<int>(schema.kernel_half.min),
                                   static_cast<int>(schema.kernel_half.max));
    const bool isotropic = categorical(rng, schema.iso_aniso_probs) == 0;
    blur.sigma1 = uniform(rng, st.sigma.min, st.sigma.max);
    blur.sigma2 = isotropic ? blur.sigma1 : uniform(rng, st.sigma.min, st.sigma.max);
    blur.theta = uniform(rng, schema.theta.min, schema.theta.max);
}

ResizeSpec sample_resize(const DegradationSchema& schema, const StageSchema& st, Rng& rng) {
    ResizeSpec r;
    switch (categorical(rng, st.resize_up_down_keep)) {
        case 0: r.scale = uniform(rng, std::max(1.0, st.scale.min), st.scale.max); break;
        case 1: r.scale = uniform(rng, st.scale.min, std::min(1.0, st.scale.max)); break;
        default: r.scale = 1.0; break;
    }
    r.mode = static_cast<ResizeMode>(categorical(rng, schema.resize_mode_probs));
    return r;
}

NoiseSpec sample_noise(const StageSchema& st, Rng& rng) {
    NoiseSpec n;
    n.kind = bernoulli(rng, st.gaussian_prob) ? NoiseKind::gaussian : NoiseKind::poisson;
    const Range& r = n.kind == NoiseKind::gaussian ? st.gaussian_sigma : st.poisson_scale;
    n.level = uniform(rng, r.min, r.max);
    n.gray = bernoulli(rng, st.gray_prob);
    return n;
}

int sample_quality(const StageSchema& st, Rng& rng) {
    return uniform_int(rng, static_cast<int>(st.jpeg_quality.min), static_cast<int>(st.jpeg_quality.max));
}

}  // namespace

DegradationParams sample_params(const DegradationSchema& schema, Level level, Rng& rng) {
    const LevelSchema& ls = schema.level(level);
    DegradationParams p;
    p.level = level;

    sample_gaussian_blur(schema, ls.stage1, rng, p.stage1.blur);
    p.stage1.resize = sample_resize(schema, ls.stage1, rng);
    p.stage1.noise = sample_noise(ls.stage1, rng);
    p.stage1.jpeg.quality = sample_quality(ls.stage1, rng);

    if (ls.stage2) {
        const StageSchema& st = *ls.stage2;
        StageSpec s2;
        if (!bernoulli(rng, st.blur_skip_prob)) sample_gaussian_blur(schema, st, rng, s2.blur);
        if (bernoulli(rng, st.sinc_prob)) {
            s2.blur.sinc_active = true;
            s2.blur.sinc_half =
                uniform_int(rng, static_cast<int>(schema.sinc_half.min), static_cast<int>(schema.sinc_half.max));
            s2.blur.omega_c = uniform(rng, schema.omega_c.min, schema.omega_c.max);
        }
        s2.resize = sample_resize(schema, st, rng);
        s2.noise = sample_noise(st, rng);
        s2.jpeg.quality = sample_quality(st, rng);
        s2.jpeg.order = bernoulli(rng, st.resize_then_jpeg_prob) ? JpegOrder::resize_then_jpeg
                                                                  : JpegOrder::jpeg_then_resize;
        s2.jpeg.final_resize_mode = static_cast<ResizeMode>(categorical(rng, schema.final_mode_probs));
        p.stage2 = s2;
    } else {
        p.stage1.jpeg.final_resize_mode = static_cast<ResizeMode>(categorical(rng, schema.final_mode_probs));
    }
    p.rng_seed = rng();

    canonicalize(p, schema.global_ranges());
    return p;
}

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw RangeError(field, field + ": " + what);
}

void require_in(double v, const Range& r, const std::string& field) {
    // One-ulp slack for values snapped onto codec fixed points.
    const double slack = 1e-12 * (r.max - r.min);
    require(std::isfinite(v) && v >= r.min - slack && v <= r.max + slack, field,
            "value " + std::to_string(v) + " outside [" + std::to_string(r.min) + ", " + std::to_string(r.max) + "]");
}

void validate_stage(const DegradationSchema& schema, const StageSchema& st, const StageSpec& s,
                    const std::string& prefix, bool second) {
    const auto& b = s.blur;
    if (b.active) {
        require_in(b.kernel_half, schema.kernel_half, prefix + ".blur.kernel_half");
        require_in(b.sigma1, st.sigma, prefix + ".blur.sigma1");
        require_in(b.sigma2, st.sigma, prefix + ".blur.sigma2");
        require_in(b.theta, schema.theta, prefix + ".blur.theta");
    } else {
        require(second, prefix + ".blur.active", "first-stage blur is always active");
    }
    if (b.sinc_active) {
        require(second, prefix + ".blur.sinc_active", "sinc filtering only exists in the second stage");
        require_in(b.sinc_half, schema.sinc_half, prefix + ".blur.sinc_half");
        require_in(b.omega_c, schema.omega_c, prefix + ".blur.omega_c");
    }
    require_in(s.resize.scale, st.scale, prefix + ".resize.scale");
    const Range& nr = s.noise.kind == NoiseKind::gaussian ? st.gaussian_sigma : st.poisson_scale;
    require_in(s.noise.level, nr, prefix + ".noise.level");
    require_in(s.jpeg.quality, st.jpeg_quality, prefix + ".jpeg.quality");
    require(s.jpeg.order.has_value() == second, prefix + ".jpeg.order",
            "operating order is present exactly on the second stage");
}

}  // namespace

void validate_for_level(const DegradationSchema& schema, const DegradationParams& params) {
    const LevelSchema& ls = schema.level(params.level);
    require(params.stage2.has_value() == ls.stage2.has_value(), "stage2",
            "second stage must be present exactly for S3");
    validate_stage(schema, ls.stage1, params.stage1, "stage1", false);
    if (params.stage2) validate_stage(schema, *ls.stage2, *params.stage2, "stage2", true);
    const JpegSpec& last = params.stage2 ? params.stage2->jpeg : params.stage1.jpeg;
    require(last.final_resize_mode.has_value(), "final_resize_mode", "missing on the last stage");
    if (params.stage2) {
        require(!params.stage1.jpeg.final_resize_mode.has_value(), "stage1.jpeg.final_resize_mode",
                "only the last stage carries the final resize mode");
    }
}

}  // namespace dforge
