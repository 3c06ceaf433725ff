#include "dforge/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "dforge/error.hpp"
#include "dforge/pipeline/jpeg.hpp"

namespace dforge {

Image::Image(int height, int width, double fill) : height_(height), width_(width) {
    if (height <= 0 || width <= 0) {
        throw Error(ErrorCode::dimension, "image dimensions must be positive, got " +
                                              std::to_string(height) + "x" + std::to_string(width));
    }
    data_.assign(static_cast<std::size_t>(channels) * plane_size(), fill);
}

void Image::clamp01() noexcept {
    for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
}

bool Image::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<std::uint8_t> to_rgb8(const Image& img) {
    const std::size_t n = img.plane_size();
    std::vector<std::uint8_t> out(n * 3);
    for (int c = 0; c < 3; ++c) {
        auto plane = img.plane(c);
        for (std::size_t i = 0; i < n; ++i) {
            double v = std::round(std::clamp(plane[i], 0.0, 1.0) * 255.0);
            out[i * 3 + c] = static_cast<std::uint8_t>(v);
        }
    }
    return out;
}

Image from_rgb8(std::span<const std::uint8_t> rgb, int height, int width) {
    Image img(height, width);
    const std::size_t n = img.plane_size();
    if (rgb.size() != n * 3) throw Error(ErrorCode::dimension, "rgb buffer size mismatch");
    for (int c = 0; c < 3; ++c) {
        auto plane = img.plane(c);
        for (std::size_t i = 0; i < n; ++i) plane[i] = rgb[i * 3 + c] / 255.0;
    }
    return img;
}

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct PngImageGuard {
    png_image* image;
    ~PngImageGuard() { png_image_free(image); }
};

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
    auto rgb = to_rgb8(img);
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;
    PngImageGuard guard{&image};

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, rgb.data(), 0, nullptr)) {
        throw Error(ErrorCode::io, std::string("png encode failed: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, rgb.data(), 0, nullptr)) {
        throw Error(ErrorCode::io, std::string("png encode failed: ") + image.message);
    }
    out.resize(size);
    return out;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    PngImageGuard guard{&image};
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw Error(ErrorCode::io, std::string("png decode failed: ") + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(image));
    // Alpha is composited onto black by the simplified API.
    if (!png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr)) {
        throw Error(ErrorCode::io, std::string("png decode failed: ") + image.message);
    }
    return from_rgb8(rgb, static_cast<int>(image.height), static_cast<int>(image.width));
}

void write_png(const Image& img, const std::filesystem::path& path) {
    auto bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::io, "short write to " + path.string());
}

Image read_png(const std::filesystem::path& path) {
    auto bytes = read_file(path);
    try {
        return decode_png(bytes);
    } catch (const Error& e) {
        throw Error(ErrorCode::io, path.string() + ": " + e.what());
    }
}

Image decode_image(std::span<const std::uint8_t> bytes) {
    static constexpr std::uint8_t png_sig[] = {0x89, 'P', 'N', 'G'};
    if (bytes.size() >= 4 && std::equal(std::begin(png_sig), std::end(png_sig), bytes.begin())) {
        return decode_png(bytes);
    }
    if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
        return decode_jpeg(bytes);
    }
    throw Error(ErrorCode::io, "unrecognized image format (expected PNG or JPEG)");
}

Image read_image(const std::filesystem::path& path) {
    auto bytes = read_file(path);
    try {
        return decode_image(bytes);
    } catch (const Error& e) {
        throw Error(ErrorCode::io, path.string() + ": " + e.what());
    }
}

Image center_crop(const Image& img, int height, int width) {
    if (height > img.height() || width > img.width()) {
        throw Error(ErrorCode::dimension, "crop larger than image");
    }
    const int y0 = (img.height() - height) / 2;
    const int x0 = (img.width() - width) / 2;
    Image out(height, width);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) out.at(c, y, x) = img.at(c, y + y0, x + x0);
    return out;
}

}  // namespace dforge
