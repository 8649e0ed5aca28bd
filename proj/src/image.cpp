#include "mcpr/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace mcpr {

ImageRgb make_image(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    ImageRgb img;
    img.width = width;
    img.height = height;
    img.pixels.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
        img.pixels[i] = r;
        img.pixels[i + 1] = g;
        img.pixels[i + 2] = b;
    }
    return img;
}

ImageRgb read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot open PPM file '" + path + "'");
    std::string magic;
    in >> magic;
    if (magic != "P6") throw DataError("not a P6 PPM file: '" + path + "'");
    // Header tokens may be separated by whitespace or '#' comments.
    auto next_int = [&]() -> int {
        for (;;) {
            int c = in.peek();
            if (c == '#') {
                std::string comment;
                std::getline(in, comment);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        int v = 0;
        if (!(in >> v)) throw DataError("truncated PPM header in '" + path + "'");
        return v;
    };
    const int w = next_int();
    const int h = next_int();
    const int maxval = next_int();
    if (w <= 0 || h <= 0) throw DataError("bad PPM dimensions in '" + path + "'");
    if (maxval != 255) throw DataError("unsupported PPM maxval in '" + path + "'");
    in.get();  // single whitespace after maxval
    ImageRgb img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw DataError("truncated PPM payload in '" + path + "'");
    }
    return img;
}

void write_ppm(const std::string& path, const ImageRgb& img) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write PPM file '" + path + "'");
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out.flush()) throw DataError("write failed for '" + path + "'");
}

ImageRgb bilinear_resize(const ImageRgb& src, int out_width, int out_height) {
    if (src.width <= 0 || src.height <= 0 || src.pixels.empty()) {
        throw DataError("cannot resize an empty image");
    }
    ImageRgb dst;
    dst.width = out_width;
    dst.height = out_height;
    dst.pixels.resize(static_cast<std::size_t>(out_width) * out_height * 3);
    const double sx = static_cast<double>(src.width) / out_width;
    const double sy = static_cast<double>(src.height) / out_height;
    for (int oy = 0; oy < out_height; ++oy) {
        const double fy = (oy + 0.5) * sy - 0.5;
        const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, src.height - 1);
        const int y1 = std::min(y0 + 1, src.height - 1);
        const double wy = std::clamp(fy - std::floor(fy), 0.0, 1.0);
        for (int ox = 0; ox < out_width; ++ox) {
            const double fx = (ox + 0.5) * sx - 0.5;
            const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, src.width - 1);
            const int x1 = std::min(x0 + 1, src.width - 1);
            const double wx = std::clamp(fx - std::floor(fx), 0.0, 1.0);
            for (int c = 0; c < 3; ++c) {
                const double top = src.at(x0, y0, c) * (1 - wx) + src.at(x1, y0, c) * wx;
                const double bot = src.at(x0, y1, c) * (1 - wx) + src.at(x1, y1, c) * wx;
                const double v = top * (1 - wy) + bot * wy;
                dst.at(ox, oy, c) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return dst;
}

ImageRgb box_blur(const ImageRgb& src, int radius) {
    if (radius < 0) throw DataError("blur radius must be non-negative");
    if (radius == 0) return src;
    ImageRgb dst = src;
    const int n = 2 * radius + 1;
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double sum = 0;
                for (int dy = -radius; dy <= radius; ++dy) {
                    const int yy = std::clamp(y + dy, 0, src.height - 1);
                    for (int dx = -radius; dx <= radius; ++dx) {
                        const int xx = std::clamp(x + dx, 0, src.width - 1);
                        sum += src.at(xx, yy, c);
                    }
                }
                dst.at(x, y, c) = static_cast<std::uint8_t>(std::lround(sum / (n * n)));
            }
        }
    }
    return dst;
}

}  // namespace mcpr
