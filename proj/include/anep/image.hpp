#pragma once

#include <cstdint>
#include <vector>

namespace anep {

// Row-major RGB8 buffer. pixels.size() == width * height * 3.
struct Rgb8Image {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;

    bool valid() const {
        return width >= 1 && height >= 1 &&
               pixels.size() == size_t(width) * size_t(height) * 3;
    }
    uint8_t* at(int x, int y) { return pixels.data() + 3 * (size_t(y) * width + x); }
    const uint8_t* at(int x, int y) const { return pixels.data() + 3 * (size_t(y) * width + x); }
};

// Row-major single-channel 8-bit buffer.
struct Grey8Image {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;

    bool valid() const {
        return width >= 1 && height >= 1 && pixels.size() == size_t(width) * size_t(height);
    }
    uint8_t& at(int x, int y) { return pixels[size_t(y) * width + x]; }
    uint8_t at(int x, int y) const { return pixels[size_t(y) * width + x]; }
};

// Rec.601 luma: y = round(0.299 R + 0.587 G + 0.114 B).
Grey8Image to_greyscale(const Rgb8Image& rgb);
uint8_t luma601(uint8_t r, uint8_t g, uint8_t b);

// Copies the [x, x+w) x [y, y+h) window; the window must lie inside the image.
Rgb8Image crop(const Rgb8Image& img, int x, int y, int w, int h);

}  // namespace anep
