#include "lfsal/png_io.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <png.h>
#include <vector>

#include "lfsal/errors.hpp"

namespace lfsal {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    (void)png;
    throw FormatError(std::string("png: ") + msg);
}

void png_warn_fn(png_structp, png_const_charp) {}

struct Decoded {
    std::size_t w = 0, h = 0, channels = 0;
    std::vector<unsigned char> bytes;  // row-major, interleaved
};

Decoded decode(const std::string& path, bool want_rgb) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw FormatError("cannot open " + path);

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8))
        throw FormatError("not a PNG file: " + path);

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warn_fn);
    if (!png) throw FormatError("png reader allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw FormatError("png info allocation failed");
    }

    Decoded out;
    try {
        png_init_io(png, f.get());
        png_set_sig_bytes(png, 8);
        png_read_info(png, info);

        png_set_expand(png);
        png_set_strip_16(png);
        png_set_strip_alpha(png);
        if (want_rgb)
            png_set_gray_to_rgb(png);
        else
            png_set_rgb_to_gray(png, 1, -1.0, -1.0);  // default Rec. 601 coefficients
        png_read_update_info(png, info);

        out.w = png_get_image_width(png, info);
        out.h = png_get_image_height(png, info);
        out.channels = png_get_channels(png, info);
        const std::size_t expect = want_rgb ? 3 : 1;
        if (out.channels != expect)
            throw FormatError("unexpected channel count in " + path);

        out.bytes.resize(out.w * out.h * out.channels);
        std::vector<png_bytep> rows(out.h);
        for (std::size_t y = 0; y < out.h; ++y)
            rows[y] = out.bytes.data() + y * out.w * out.channels;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

void encode(const std::string& path, std::size_t w, std::size_t h, std::size_t channels,
            const std::vector<unsigned char>& bytes) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw FormatError("cannot write " + path);

    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warn_fn);
    if (!png) throw FormatError("png writer allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw FormatError("png info allocation failed");
    }

    try {
        png_init_io(png, f.get());
        png_set_IHDR(png, info, (png_uint_32)w, (png_uint_32)h, 8,
                     channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        std::vector<png_bytep> rows(h);
        for (std::size_t y = 0; y < h; ++y)
            rows[y] = const_cast<png_bytep>(bytes.data() + y * w * channels);
        png_write_image(png, rows.data());
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
}

unsigned char quantize(double v) {
    const double c = std::min(1.0, std::max(0.0, v));
    return (unsigned char)std::lround(c * 255.0);
}

}  // namespace

Tensor load_png_rgb(const std::string& path) {
    Decoded d = decode(path, true);
    Tensor t({3, d.h, d.w});
    for (std::size_t y = 0; y < d.h; ++y)
        for (std::size_t x = 0; x < d.w; ++x)
            for (std::size_t c = 0; c < 3; ++c)
                t.at3(c, y, x) = d.bytes[(y * d.w + x) * 3 + c] / 255.0;
    return t;
}

Tensor load_png_gray(const std::string& path) {
    Decoded d = decode(path, false);
    Tensor t({1, d.h, d.w});
    for (std::size_t y = 0; y < d.h; ++y)
        for (std::size_t x = 0; x < d.w; ++x) t.at3(0, y, x) = d.bytes[y * d.w + x] / 255.0;
    return t;
}

void save_png_rgb(const std::string& path, const Tensor& image) {
    if (image.rank() != 3 || image.extent(0) != 3)
        throw DimensionError("save_png_rgb expects [3,H,W], got " + shape_str(image.shape));
    const std::size_t h = image.extent(1), w = image.extent(2);
    std::vector<unsigned char> bytes(w * h * 3);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            for (std::size_t c = 0; c < 3; ++c)
                bytes[(y * w + x) * 3 + c] = quantize(image.at3(c, y, x));
    encode(path, w, h, 3, bytes);
}

void save_png_gray(const std::string& path, const Tensor& image) {
    std::size_t h = 0, w = 0;
    const double* src = image.data.data();
    if (image.rank() == 3 && image.extent(0) == 1) {
        h = image.extent(1);
        w = image.extent(2);
    } else if (image.rank() == 2) {
        h = image.extent(0);
        w = image.extent(1);
    } else {
        throw DimensionError("save_png_gray expects [1,H,W] or [H,W], got " +
                             shape_str(image.shape));
    }
    std::vector<unsigned char> bytes(w * h);
    for (std::size_t i = 0; i < w * h; ++i) bytes[i] = quantize(src[i]);
    encode(path, w, h, 1, bytes);
}

}  // namespace lfsal
