#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dforge {

enum class Level { S1, S2, S3 };
enum class ResizeMode { area, bilinear, bicubic };
enum class NoiseKind { gaussian, poisson };
enum class JpegOrder { resize_then_jpeg, jpeg_then_resize };

std::string_view to_string(Level level) noexcept;
std::string_view to_string(ResizeMode mode) noexcept;
std::string_view to_string(NoiseKind kind) noexcept;
std::string_view to_string(JpegOrder order) noexcept;

Level parse_level(std::string_view text);
ResizeMode parse_resize_mode(std::string_view text);
NoiseKind parse_noise_kind(std::string_view text);
JpegOrder parse_jpeg_order(std::string_view text);

// Inactive blur / sinc components keep every numeric field at zero so that
// structurally equal degradations compare equal.
struct BlurSpec {
    bool active = false;
    int kernel_half = 0;  // kernel size 2m+1
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double theta = 0.0;  // radians
    bool sinc_active = false;
    int sinc_half = 0;
    double omega_c = 0.0;  // radians

    friend bool operator==(const BlurSpec&, const BlurSpec&) = default;
};

struct ResizeSpec {
    double scale = 1.0;
    ResizeMode mode = ResizeMode::area;

    friend bool operator==(const ResizeSpec&, const ResizeSpec&) = default;
};

struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double level = 1.0;  // sigma on the 0-255 scale, or Poisson scale
    bool gray = false;

    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

// `order` is only set on the second stage; `final_resize_mode` is set on the
// last active stage.
struct JpegSpec {
    int quality = 95;
    std::optional<JpegOrder> order;
    std::optional<ResizeMode> final_resize_mode;

    friend bool operator==(const JpegSpec&, const JpegSpec&) = default;
};

struct StageSpec {
    BlurSpec blur;
    ResizeSpec resize;
    NoiseSpec noise;
    JpegSpec jpeg;

    friend bool operator==(const StageSpec&, const StageSpec&) = default;
};

struct DegradationParams {
    Level level = Level::S1;
    StageSpec stage1;
    std::optional<StageSpec> stage2;  // present iff level == S3
    std::uint64_t rng_seed = 0;

    friend bool operator==(const DegradationParams&, const DegradationParams&) = default;

    ResizeMode final_resize_mode() const;
};

// Equality over everything except rng_seed.
bool same_degradation(const DegradationParams& a, const DegradationParams& b);

// Multi-line human readable summary.
std::string describe(const DegradationParams& params);

}  // namespace dforge
