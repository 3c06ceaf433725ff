#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dforge/degradation/params.hpp"

namespace dforge {

struct Range {
    double min = 0.0;
    double max = 1.0;

    bool contains(double v) const noexcept { return v >= min && v <= max; }
    friend bool operator==(const Range&, const Range&) = default;
};

// Sampling settings for one blur -> resize -> noise -> JPEG stage.
struct StageSchema {
    Range sigma;
    std::array<double, 3> resize_up_down_keep{};
    Range scale;
    Range gaussian_sigma;
    Range poisson_scale;
    double gaussian_prob = 0.5;
    double gray_prob = 0.4;
    Range jpeg_quality;
    // Second-stage only.
    double blur_skip_prob = 0.0;
    double sinc_prob = 0.0;
    double resize_then_jpeg_prob = 0.5;

    friend bool operator==(const StageSchema&, const StageSchema&) = default;
};

struct LevelSchema {
    StageSchema stage1;
    std::optional<StageSchema> stage2;

    friend bool operator==(const LevelSchema&, const LevelSchema&) = default;
};

// Per-parameter union over all levels and stages; the normalization basis of
// the degradation vector.
struct GlobalRanges {
    Range kernel_half;
    Range sigma;
    Range theta;
    Range omega_c;
    Range scale;
    Range gaussian_sigma;
    Range poisson_scale;
    Range jpeg_quality;

    friend bool operator==(const GlobalRanges&, const GlobalRanges&) = default;
};

struct DegradationSchema {
    std::array<double, 3> level_probs{0.3, 0.3, 0.4};
    std::array<double, 2> iso_aniso_probs{0.65, 0.35};
    std::array<double, 3> resize_mode_probs{1.0 / 3, 1.0 / 3, 1.0 / 3};
    std::array<double, 3> final_mode_probs{1.0 / 3, 1.0 / 3, 1.0 / 3};
    Range kernel_half{3, 10};
    Range theta;
    Range omega_c;
    Range sinc_half{3, 10};
    std::array<LevelSchema, 3> levels;

    const LevelSchema& level(Level l) const { return levels[static_cast<int>(l)]; }

    GlobalRanges global_ranges() const;

    // Throws RangeError on min >= max or probability groups not summing to 1.
    void validate() const;

    friend bool operator==(const DegradationSchema&, const DegradationSchema&) = default;
};

const DegradationSchema& default_schema();

// INI-style document: a [global] section plus one section per level.
std::string dump_schema(const DegradationSchema& schema);
DegradationSchema parse_schema(const std::string& text);
DegradationSchema load_schema(const std::filesystem::path& path);

// ---- 33-slot layout -------------------------------------------------------

inline constexpr int vector_size = 33;

enum class SlotKind { scalar, flag, onehot };

enum class SlotParam {
    kernel_half,
    sigma,
    theta,
    omega_c,
    scale,
    noise_level,
    jpeg_quality,
    gray,
    resize_mode,
    noise_kind,
    jpeg_order,
};

struct SlotDescriptor {
    int index;                // 1-based
    std::string_view name;
    std::string_view group;   // UI grouping label
    SlotKind kind;
    SlotParam param;
    std::string_view choice;  // one-hot member label, empty otherwise
};

const std::array<SlotDescriptor, vector_size>& slot_layout();

}  // namespace dforge
