#include "anep/dhash.hpp"

#include <algorithm>
#include <bit>

namespace anep {

namespace {

constexpr int kCols = 9;
constexpr int kRows = 8;

// Integer area-average of the greyscale reduction into a 9x8 grid.
void downscale_9x8(const Rgb8Image& image, uint8_t cells[kRows][kCols]) {
    const int w = image.width;
    const int h = image.height;
    for (int cy = 0; cy < kRows; ++cy) {
        int y0 = cy * h / kRows;
        int y1 = (cy + 1) * h / kRows;
        y0 = std::min(y0, h - 1);
        y1 = std::max(y1, y0 + 1);
        for (int cx = 0; cx < kCols; ++cx) {
            int x0 = cx * w / kCols;
            int x1 = (cx + 1) * w / kCols;
            x0 = std::min(x0, w - 1);
            x1 = std::max(x1, x0 + 1);
            uint64_t sum = 0;
            for (int y = y0; y < y1; ++y) {
                const uint8_t* px = image.at(x0, y);
                for (int x = x0; x < x1; ++x, px += 3) sum += luma601(px[0], px[1], px[2]);
            }
            cells[cy][cx] = uint8_t(sum / (uint64_t(y1 - y0) * uint64_t(x1 - x0)));
        }
    }
}

}  // namespace

FrameHash perceptual_hash(const Rgb8Image& image) {
    uint8_t cells[kRows][kCols];
    downscale_9x8(image, cells);
    uint64_t bits = 0;
    for (int row = 0; row < kRows; ++row)
        for (int col = 0; col < kCols - 1; ++col)
            if (cells[row][col] < cells[row][col + 1]) bits |= uint64_t(1) << (row * 8 + col);
    return FrameHash{bits};
}

FrameHash perceptual_hash(const Frame& frame) { return perceptual_hash(frame.image); }

int hamming(FrameHash a, FrameHash b) { return std::popcount(a.bits ^ b.bits); }

std::vector<size_t> deduplicate_hashes(const std::vector<FrameHash>& hashes, int threshold) {
    std::vector<size_t> kept;
    for (size_t i = 0; i < hashes.size(); ++i) {
        if (kept.empty() || hamming(hashes[i], hashes[kept.back()]) > threshold)
            kept.push_back(i);
    }
    return kept;
}

std::vector<Frame> deduplicate(std::vector<Frame> frames, int threshold) {
    std::vector<FrameHash> hashes;
    hashes.reserve(frames.size());
    for (const Frame& f : frames) hashes.push_back(perceptual_hash(f));
    const std::vector<size_t> kept = deduplicate_hashes(hashes, threshold);
    std::vector<Frame> out;
    out.reserve(kept.size());
    for (size_t i : kept) out.push_back(std::move(frames[i]));
    return out;
}

}  // namespace anep
