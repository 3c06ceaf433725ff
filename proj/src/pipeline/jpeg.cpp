#include "dforge/pipeline/jpeg.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <string>

// clang-format off
#include <jpeglib.h>
// clang-format on

#include "dforge/error.hpp"

namespace dforge {

namespace {

struct ErrorManager {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void on_error(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<ErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

void on_message(j_common_ptr) {}

// Every C++ object whose lifetime spans the setjmp lives in the caller.
bool compress(const std::uint8_t* rgb, int height, int width, int quality, unsigned char** buffer,
              unsigned long* size, char* message) {
    jpeg_compress_struct cinfo;
    ErrorManager err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = on_error;
    err.pub.output_message = on_message;
    if (setjmp(err.jump)) {
        std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
        jpeg_destroy_compress(&cinfo);
        return false;
    }
    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, buffer, size);
    cinfo.image_width = static_cast<JDIMENSION>(width);
    cinfo.image_height = static_cast<JDIMENSION>(height);
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    cinfo.dct_method = JDCT_ISLOW;
    // 4:2:0
    cinfo.comp_info[0].h_samp_factor = 2;
    cinfo.comp_info[0].v_samp_factor = 2;
    for (int c = 1; c < 3; ++c) {
        cinfo.comp_info[c].h_samp_factor = 1;
        cinfo.comp_info[c].v_samp_factor = 1;
    }
    jpeg_start_compress(&cinfo, TRUE);
    const std::size_t stride = static_cast<std::size_t>(width) * 3;
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(rgb + cinfo.next_scanline * stride);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    return true;
}

bool decompress(const std::uint8_t* data, std::size_t size, std::vector<std::uint8_t>& rgb, int& height,
                int& width, char* message) {
    jpeg_decompress_struct cinfo;
    ErrorManager err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = on_error;
    err.pub.output_message = on_message;
    if (setjmp(err.jump)) {
        std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, const_cast<unsigned char*>(data), static_cast<unsigned long>(size));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    cinfo.dct_method = JDCT_ISLOW;
    jpeg_start_decompress(&cinfo);
    height = static_cast<int>(cinfo.output_height);
    width = static_cast<int>(cinfo.output_width);
    if (cinfo.output_components != 3) {
        std::snprintf(message, JMSG_LENGTH_MAX, "unsupported component count %d", cinfo.output_components);
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    rgb.resize(static_cast<std::size_t>(height) * width * 3);
    const std::size_t stride = static_cast<std::size_t>(width) * 3;
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = rgb.data() + cinfo.output_scanline * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return true;
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const Image& img, int quality) {
    if (quality < 1 || quality > 100) throw Error(ErrorCode::domain, "jpeg quality must lie in [1, 100]");
    const auto rgb = to_rgb8(img);
    unsigned char* buffer = nullptr;
    unsigned long size = 0;
    char message[JMSG_LENGTH_MAX] = {};
    const bool ok = compress(rgb.data(), img.height(), img.width(), quality, &buffer, &size, message);
    std::vector<std::uint8_t> out;
    if (ok) out.assign(buffer, buffer + size);
    std::free(buffer);
    if (!ok) throw Error(ErrorCode::io, std::string("jpeg encode failed: ") + message);
    return out;
}

Image decode_jpeg(std::span<const std::uint8_t> bytes) {
    std::vector<std::uint8_t> rgb;
    int height = 0;
    int width = 0;
    char message[JMSG_LENGTH_MAX] = {};
    if (!decompress(bytes.data(), bytes.size(), rgb, height, width, message)) {
        throw Error(ErrorCode::io, std::string("jpeg decode failed: ") + message);
    }
    return from_rgb8(rgb, height, width);
}

Image jpeg_roundtrip(const Image& img, int quality) {
    if (quality < 30 || quality > 95) {
        throw Error(ErrorCode::domain, "jpeg quality must lie in [30, 95], got " + std::to_string(quality));
    }
    return decode_jpeg(encode_jpeg(img, quality));
}

}  // namespace dforge
