#include "dforge/degradation/params.hpp"

#include <sstream>

#include "dforge/error.hpp"

namespace dforge {

std::string_view to_string(Level level) noexcept {
    switch (level) {
        case Level::S1: return "S1";
        case Level::S2: return "S2";
        case Level::S3: return "S3";
    }
    return "?";
}

std::string_view to_string(ResizeMode mode) noexcept {
    switch (mode) {
        case ResizeMode::area: return "area";
        case ResizeMode::bilinear: return "bilinear";
        case ResizeMode::bicubic: return "bicubic";
    }
    return "?";
}

std::string_view to_string(NoiseKind kind) noexcept {
    return kind == NoiseKind::gaussian ? "gaussian" : "poisson";
}

std::string_view to_string(JpegOrder order) noexcept {
    return order == JpegOrder::resize_then_jpeg ? "R-J" : "J-R";
}

Level parse_level(std::string_view text) {
    if (text == "S1" || text == "s1" || text == "1") return Level::S1;
    if (text == "S2" || text == "s2" || text == "2") return Level::S2;
    if (text == "S3" || text == "s3" || text == "3") return Level::S3;
    throw Error(ErrorCode::usage, "unknown level '" + std::string(text) + "' (expected S1, S2 or S3)");
}

ResizeMode parse_resize_mode(std::string_view text) {
    if (text == "area") return ResizeMode::area;
    if (text == "bilinear") return ResizeMode::bilinear;
    if (text == "bicubic") return ResizeMode::bicubic;
    throw Error(ErrorCode::invalid_input, "unknown resize mode '" + std::string(text) + "'");
}

NoiseKind parse_noise_kind(std::string_view text) {
    if (text == "gaussian") return NoiseKind::gaussian;
    if (text == "poisson") return NoiseKind::poisson;
    throw Error(ErrorCode::invalid_input, "unknown noise kind '" + std::string(text) + "'");
}

JpegOrder parse_jpeg_order(std::string_view text) {
    if (text == "R-J") return JpegOrder::resize_then_jpeg;
    if (text == "J-R") return JpegOrder::jpeg_then_resize;
    throw Error(ErrorCode::invalid_input, "unknown jpeg order '" + std::string(text) + "'");
}

ResizeMode DegradationParams::final_resize_mode() const {
    const auto& last = stage2 ? stage2->jpeg : stage1.jpeg;
    return last.final_resize_mode.value_or(ResizeMode::area);
}

bool same_degradation(const DegradationParams& a, const DegradationParams& b) {
    return a.level == b.level && a.stage1 == b.stage1 && a.stage2 == b.stage2;
}

namespace {

void describe_stage(std::ostringstream& os, const StageSpec& s, int index) {
    os << "stage " << index << ":\n";
    if (s.blur.active) {
        os << "  blur      size " << 2 * s.blur.kernel_half + 1 << ", sigma (" << s.blur.sigma1 << ", "
           << s.blur.sigma2 << "), theta " << s.blur.theta << "\n";
    } else {
        os << "  blur      skipped\n";
    }
    if (s.blur.sinc_active) {
        os << "  sinc      size " << 2 * s.blur.sinc_half + 1 << ", omega_c " << s.blur.omega_c << "\n";
    }
    os << "  resize    x" << s.resize.scale << " " << to_string(s.resize.mode) << "\n";
    os << "  noise     " << to_string(s.noise.kind) << " " << s.noise.level << (s.noise.gray ? " gray" : " color")
       << "\n";
    os << "  jpeg      q" << s.jpeg.quality;
    if (s.jpeg.order) os << " order " << to_string(*s.jpeg.order);
    os << "\n";
    if (s.jpeg.final_resize_mode) os << "  final     " << to_string(*s.jpeg.final_resize_mode) << " to 1/4\n";
}

}  // namespace

std::string describe(const DegradationParams& params) {
    std::ostringstream os;
    os << "level " << to_string(params.level) << "\n";
    describe_stage(os, params.stage1, 1);
    if (params.stage2) describe_stage(os, *params.stage2, 2);
    return os.str();
}

}  // namespace dforge
