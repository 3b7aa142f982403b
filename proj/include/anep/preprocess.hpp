#pragma once

#include <optional>

#include "anep/detect.hpp"
#include "anep/errors.hpp"
#include "anep/frame.hpp"
#include "anep/image.hpp"

namespace anep {

struct ClaheParams {
    double clip_limit = 2.0;  // >= 1.0; histogram clip as a multiple of the uniform bin height
    int tiles_x = 8;
    int tiles_y = 8;
};

struct ThresholdParams {
    int window = 11;        // odd neighborhood side
    double offset_c = 2.0;  // subtracted from the neighborhood mean
};

struct PreprocessParams {
    ClaheParams clahe;
    ThresholdParams threshold;
};

// Contrast-limited adaptive histogram equalization.
//
// Exact definition (the oracle tests depend on every line of it):
//   - Tile column i covers x in [floor(i*W/tx), floor((i+1)*W/tx)); rows
//     likewise. Requires W >= tx and H >= ty, otherwise the function falls
//     back to plain global equalization and reports it.
//   - Per tile: 256-bin histogram over area A. Clip ceiling
//     L = max(1, floor(clip_limit * A / 256)); excess above L is removed,
//     then redistributed as excess/256 per bin plus one extra unit to bins
//     0..(excess mod 256)-1.
//   - Mapping: lut[v] = floor(cdf[v] * 255 / A).
//   - Output pixel: bilinear interpolation between the luts of the (up to
//     four) tiles whose centers surround the pixel center (x+0.5, y+0.5);
//     tile center = midpoint of the tile's pixel span. Outside the center
//     grid the edge tile's mapping applies. Final value rounds as
//     floor(z + 0.5).
struct ClaheResult {
    Grey8Image image;
    bool used_global_fallback = false;
};
ClaheResult clahe(const Grey8Image& grey, const ClaheParams& params);

// Plain global histogram equalization with the same lut rule (no clipping).
Grey8Image equalize_global(const Grey8Image& grey);

// Local mean threshold: out = 255 iff value > mean(window x window,
// edge-replicated) - offset_c, else 0. The comparison is strict.
Grey8Image adaptive_threshold(const Grey8Image& grey, const ThresholdParams& params);

// A binarized crop ready for OCR. Every pixel is 0 or 255.
struct BinarizedPatch {
    Grey8Image image;
    GraphicRegion source_region;
    double frame_timestamp_s = 0.0;
    bool clahe_used_fallback = false;
};

// crop -> greyscale -> clahe -> adaptive threshold. Pure in (pixels, region,
// params); returns nullopt (with a warning) for regions that clamp to zero
// area.
std::optional<BinarizedPatch> preprocess_region(const Frame& frame, const GraphicRegion& region,
                                                const PreprocessParams& params, Diagnostics& diag);

}  // namespace anep
