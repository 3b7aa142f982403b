#include "anep/image.hpp"

#include <cassert>
#include <cmath>

namespace anep {

uint8_t luma601(uint8_t r, uint8_t g, uint8_t b) {
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return static_cast<uint8_t>(std::lround(y));
}

Grey8Image to_greyscale(const Rgb8Image& rgb) {
    Grey8Image out;
    out.width = rgb.width;
    out.height = rgb.height;
    out.pixels.resize(rgb.pixels.size() / 3);
    const uint8_t* src = rgb.pixels.data();
    for (size_t i = 0; i < out.pixels.size(); ++i, src += 3)
        out.pixels[i] = luma601(src[0], src[1], src[2]);
    return out;
}

Rgb8Image crop(const Rgb8Image& img, int x, int y, int w, int h) {
    assert(x >= 0 && y >= 0 && w >= 1 && h >= 1 && x + w <= img.width && y + h <= img.height);
    Rgb8Image out;
    out.width = w;
    out.height = h;
    out.pixels.resize(size_t(w) * h * 3);
    for (int row = 0; row < h; ++row) {
        const uint8_t* src = img.at(x, y + row);
        uint8_t* dst = out.at(0, row);
        std::copy(src, src + size_t(w) * 3, dst);
    }
    return out;
}

}  // namespace anep
