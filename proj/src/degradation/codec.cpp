#include "dforge/degradation/codec.hpp"

#include <algorithm>
#include <cmath>

#include "dforge/degradation/sampler.hpp"
#include "dforge/error.hpp"

namespace dforge {

double normalize(double value, const Range& range) noexcept {
    return (value - range.min) / (range.max - range.min);
}

double denormalize(double unit, const Range& range) noexcept {
    return range.min + unit * (range.max - range.min);
}

namespace {

// denormalize(normalize(.)) is monotone, so iterating it from any start
// reaches a fixed point in a handful of steps.
double snap(double x, const Range& r) {
    for (int i = 0; i < 64; ++i) {
        const double y = denormalize(normalize(x, r), r);
        if (y == x) break;
        x = y;
    }
    return x;
}

void canonicalize_stage(StageSpec& s, const GlobalRanges& g) {
    if (s.blur.active) {
        s.blur.sigma1 = snap(s.blur.sigma1, g.sigma);
        s.blur.sigma2 = snap(s.blur.sigma2, g.sigma);
        s.blur.theta = snap(s.blur.theta, g.theta);
    }
    if (s.blur.sinc_active) s.blur.omega_c = snap(s.blur.omega_c, g.omega_c);
    s.resize.scale = snap(s.resize.scale, g.scale);
    s.noise.level = snap(s.noise.level, s.noise.kind == NoiseKind::gaussian ? g.gaussian_sigma : g.poisson_scale);
}

// Slot accessor with 1-based indices.
struct Slots {
    DegradationVector& v;
    double& operator[](int index) { return v[index - 1]; }
};

double encode_scalar(double value, const Range& r, const char* field) {
    const double slack = 1e-12 * (r.max - r.min);
    if (!std::isfinite(value) || value < r.min - slack || value > r.max + slack) {
        throw RangeError(field, std::string(field) + ": value " + std::to_string(value) + " outside [" +
                                    std::to_string(r.min) + ", " + std::to_string(r.max) + "]");
    }
    return std::clamp(normalize(value, r), 0.0, 1.0);
}

template <typename Enum>
void one_hot(Slots s, int first, Enum value) {
    s[first + static_cast<int>(value)] = 1.0;
}

}  // namespace

void canonicalize(DegradationParams& params, const GlobalRanges& ranges) {
    canonicalize_stage(params.stage1, ranges);
    if (params.stage2) canonicalize_stage(*params.stage2, ranges);
}

DegradationVector encode(const DegradationParams& p, const GlobalRanges& g) {
    DegradationVector v{};
    Slots s{v};

    const auto& b1 = p.stage1.blur;
    if (b1.active) {
        s[1] = encode_scalar(b1.kernel_half, g.kernel_half, "stage1.blur.kernel_half");
        s[2] = encode_scalar(b1.sigma1, g.sigma, "stage1.blur.sigma1");
        s[3] = encode_scalar(b1.sigma2, g.sigma, "stage1.blur.sigma2");
        s[4] = encode_scalar(b1.theta, g.theta, "stage1.blur.theta");
    }
    s[11] = encode_scalar(p.stage1.resize.scale, g.scale, "stage1.resize.scale");
    one_hot(s, 12, p.stage1.resize.mode);
    const auto& n1 = p.stage1.noise;
    s[19] = encode_scalar(n1.level, n1.kind == NoiseKind::gaussian ? g.gaussian_sigma : g.poisson_scale,
                          "stage1.noise.level");
    s[20] = n1.gray ? 1.0 : 0.0;
    one_hot(s, 21, n1.kind);
    s[27] = encode_scalar(p.stage1.jpeg.quality, g.jpeg_quality, "stage1.jpeg.quality");

    if (p.stage2) {
        const auto& st = *p.stage2;
        if (st.blur.active) {
            s[5] = encode_scalar(st.blur.kernel_half, g.kernel_half, "stage2.blur.kernel_half");
            s[6] = encode_scalar(st.blur.sigma1, g.sigma, "stage2.blur.sigma1");
            s[7] = encode_scalar(st.blur.sigma2, g.sigma, "stage2.blur.sigma2");
            s[8] = encode_scalar(st.blur.theta, g.theta, "stage2.blur.theta");
        }
        if (st.blur.sinc_active) {
            s[9] = encode_scalar(st.blur.sinc_half, g.kernel_half, "stage2.blur.sinc_half");
            s[10] = encode_scalar(st.blur.omega_c, g.omega_c, "stage2.blur.omega_c");
        }
        s[15] = encode_scalar(st.resize.scale, g.scale, "stage2.resize.scale");
        one_hot(s, 16, st.resize.mode);
        s[23] = encode_scalar(st.noise.level,
                              st.noise.kind == NoiseKind::gaussian ? g.gaussian_sigma : g.poisson_scale,
                              "stage2.noise.level");
        s[24] = st.noise.gray ? 1.0 : 0.0;
        one_hot(s, 25, st.noise.kind);
        s[28] = encode_scalar(st.jpeg.quality, g.jpeg_quality, "stage2.jpeg.quality");
        if (!st.jpeg.order) throw RangeError("stage2.jpeg.order", "stage2.jpeg.order: missing operating order");
        one_hot(s, 29, *st.jpeg.order);
    }
    one_hot(s, 31, p.final_resize_mode());
    return v;
}

DegradationVector encode(const DegradationParams& params) {
    static const GlobalRanges ranges = default_schema().global_ranges();
    return encode(params, ranges);
}

namespace {

int argmax(const DegradationVector& v, int first, int count) {
    int best = 0;
    for (int i = 1; i < count; ++i) {
        if (v[first - 1 + i] > v[first - 1 + best]) best = i;
    }
    return best;
}

bool any_active(const DegradationVector& v, int first, int last) {
    for (int i = first; i <= last; ++i) {
        if (v[i - 1] > activity_threshold) return true;
    }
    return false;
}

int decode_int(double unit, const Range& r) {
    return static_cast<int>(std::clamp(std::round(denormalize(unit, r)), r.min, r.max));
}

bool fits_level(const DegradationSchema& schema, DegradationParams p, Level level) {
    p.level = level;
    try {
        validate_for_level(schema, p);
        return true;
    } catch (const RangeError&) {
        return false;
    }
}

}  // namespace

DegradationParams decode(const DegradationVector& v, const DegradationSchema& schema) {
    for (int i = 0; i < vector_size; ++i) {
        if (!std::isfinite(v[i])) {
            throw Error(ErrorCode::invalid_vector, "v" + std::to_string(i + 1) + " is not finite");
        }
        if (v[i] < 0.0 || v[i] > 1.0) {
            throw Error(ErrorCode::invalid_vector, "v" + std::to_string(i + 1) + " outside [0,1]");
        }
    }
    const GlobalRanges g = schema.global_ranges();
    auto at = [&](int index) { return v[index - 1]; };

    DegradationParams p;
    auto& s1 = p.stage1;
    s1.blur.active = true;
    s1.blur.kernel_half = decode_int(at(1), g.kernel_half);
    s1.blur.sigma1 = denormalize(at(2), g.sigma);
    s1.blur.sigma2 = denormalize(at(3), g.sigma);
    s1.blur.theta = denormalize(at(4), g.theta);
    s1.resize.scale = denormalize(at(11), g.scale);
    s1.resize.mode = static_cast<ResizeMode>(argmax(v, 12, 3));
    s1.noise.kind = static_cast<NoiseKind>(argmax(v, 21, 2));
    s1.noise.level =
        denormalize(at(19), s1.noise.kind == NoiseKind::gaussian ? g.gaussian_sigma : g.poisson_scale);
    s1.noise.gray = at(20) > 0.5;
    s1.jpeg.quality = decode_int(at(27), g.jpeg_quality);
    const auto final_mode = static_cast<ResizeMode>(argmax(v, 31, 3));

    // v27 is the stage-one JPEG quality, so it cannot signal a second stage.
    const bool stage2 = any_active(v, 5, 10) || any_active(v, 15, 18) || any_active(v, 23, 26) || any_active(v, 28, 30);
    if (stage2) {
        StageSpec s2;
        if (any_active(v, 5, 8)) {
            s2.blur.active = true;
            s2.blur.kernel_half = decode_int(at(5), g.kernel_half);
            s2.blur.sigma1 = denormalize(at(6), g.sigma);
            s2.blur.sigma2 = denormalize(at(7), g.sigma);
            s2.blur.theta = denormalize(at(8), g.theta);
        }
        if (any_active(v, 9, 10)) {
            s2.blur.sinc_active = true;
            s2.blur.sinc_half = decode_int(at(9), g.kernel_half);
            s2.blur.omega_c = denormalize(at(10), g.omega_c);
        }
        s2.resize.scale = denormalize(at(15), g.scale);
        s2.resize.mode = static_cast<ResizeMode>(argmax(v, 16, 3));
        s2.noise.kind = static_cast<NoiseKind>(argmax(v, 25, 2));
        s2.noise.level =
            denormalize(at(23), s2.noise.kind == NoiseKind::gaussian ? g.gaussian_sigma : g.poisson_scale);
        s2.noise.gray = at(24) > 0.5;
        s2.jpeg.quality = decode_int(at(28), g.jpeg_quality);
        s2.jpeg.order = static_cast<JpegOrder>(argmax(v, 29, 2));
        s2.jpeg.final_resize_mode = final_mode;
        p.stage2 = s2;
        p.level = Level::S3;
    } else {
        s1.jpeg.final_resize_mode = final_mode;
        p.level = fits_level(schema, p, Level::S1)   ? Level::S1
                  : fits_level(schema, p, Level::S2) ? Level::S2
                                                     : Level::S1;
    }
    return p;
}

DegradationParams decode(const DegradationVector& v) { return decode(v, default_schema()); }

bool is_well_formed(const DegradationVector& v) {
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0 || x > 1.0) return false;
    }
    static constexpr std::pair<int, int> groups[] = {{12, 3}, {16, 3}, {21, 2}, {25, 2}, {29, 2}, {31, 3}};
    for (auto [first, count] : groups) {
        double sum = 0.0;
        for (int i = 0; i < count; ++i) {
            const double x = v[first - 1 + i];
            if (x != 0.0 && x != 1.0) return false;
            sum += x;
        }
        if (sum > 1.0) return false;
    }
    return (v[19] == 0.0 || v[19] == 1.0) && (v[23] == 0.0 || v[23] == 1.0);
}

}  // namespace dforge
