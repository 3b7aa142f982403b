#pragma once

#include <cstdint>
#include <vector>

#include "anep/frame.hpp"
#include "anep/image.hpp"

namespace anep {

// 64-bit difference hash of frame appearance. Equal pixel buffers always
// produce equal hashes; small Hamming distance means visual near-duplication.
struct FrameHash {
    uint64_t bits = 0;
    friend bool operator==(const FrameHash&, const FrameHash&) = default;
};

// dHash over a 9x8 greyscale reduction:
//   1. Rec.601 greyscale.
//   2. Area-average downscale to 9 columns x 8 rows. Cell (cx, cy) averages
//      the source rectangle [floor(cx*W/9), floor((cx+1)*W/9)) x
//      [floor(cy*H/8), floor((cy+1)*H/8)) (at least one pixel per cell),
//      integer mean.
//   3. Bit (row*8 + col) is set iff cell(col, row) < cell(col+1, row).
FrameHash perceptual_hash(const Rgb8Image& image);
FrameHash perceptual_hash(const Frame& frame);

// Number of differing bits, in [0, 64].
int hamming(FrameHash a, FrameHash b);

// Keeps a frame iff its hash differs from the hash of the last KEPT frame by
// more than `threshold` bits. The first frame is always kept and input order
// is preserved. Comparing against the last kept frame (not a global set)
// keeps the first frame of each new scene after a long static graphic.
std::vector<Frame> deduplicate(std::vector<Frame> frames, int threshold);

// Same fold over precomputed hashes; returns indices of kept positions.
std::vector<size_t> deduplicate_hashes(const std::vector<FrameHash>& hashes, int threshold);

}  // namespace anep
