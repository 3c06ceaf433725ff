#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace dforge {

// Planar RGB raster with values nominally in [0,1]. Storage is channel-major,
// row-major within a channel: data[(c * height + y) * width + x].
class Image {
public:
    static constexpr int channels = 3;

    Image() = default;
    Image(int height, int width, double fill = 0.0);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t plane_size() const noexcept {
        return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
    }
    bool empty() const noexcept { return data_.empty(); }

    double& at(int c, int y, int x) noexcept { return data_[index(c, y, x)]; }
    double at(int c, int y, int x) const noexcept { return data_[index(c, y, x)]; }

    std::span<double> plane(int c) noexcept { return {data_.data() + c * plane_size(), plane_size()}; }
    std::span<const double> plane(int c) const noexcept {
        return {data_.data() + c * plane_size(), plane_size()};
    }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    void clamp01() noexcept;
    bool all_finite() const noexcept;

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int c, int y, int x) const noexcept {
        return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

// Interleaved 8-bit RGB <-> Image. Quantization rounds v*255 to nearest.
std::vector<std::uint8_t> to_rgb8(const Image& img);
Image from_rgb8(std::span<const std::uint8_t> rgb, int height, int width);

// 8-bit PNG I/O. Grayscale and alpha inputs are converted to RGB.
Image read_png(const std::filesystem::path& path);
void write_png(const Image& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(std::span<const std::uint8_t> bytes);

// Reads PNG or JPEG by signature.
Image read_image(const std::filesystem::path& path);
Image decode_image(std::span<const std::uint8_t> bytes);

// Center crop to the given size (must not exceed the current size).
Image center_crop(const Image& img, int height, int width);

}  // namespace dforge
