#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcpr/common.hpp"

namespace mcpr {

/// 8-bit RGB, row-major, channel interleaved.
struct ImageRgb {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int x, int y, int c) const {
        return pixels[static_cast<std::size_t>((y * width + x) * 3 + c)];
    }
    std::uint8_t& at(int x, int y, int c) {
        return pixels[static_cast<std::size_t>((y * width + x) * 3 + c)];
    }
};

ImageRgb make_image(int width, int height, std::uint8_t r = 0, std::uint8_t g = 0,
                    std::uint8_t b = 0);

// Binary PPM (P6), maxval 255.
ImageRgb read_ppm(const std::string& path);
void write_ppm(const std::string& path, const ImageRgb& img);

/// Bilinear resampling with centre-aligned pixel grids and edge clamp.
ImageRgb bilinear_resize(const ImageRgb& src, int out_width, int out_height);

/// Box blur with a (2r+1)^2 kernel, edges clamped. radius 0 is the
/// identity.
ImageRgb box_blur(const ImageRgb& src, int radius);

}  // namespace mcpr
