#include "anep/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace anep {

namespace {

using Lut = std::array<uint8_t, 256>;

Lut lut_from_histogram(const std::array<uint64_t, 256>& hist, uint64_t area) {
    Lut lut{};
    uint64_t cdf = 0;
    for (int v = 0; v < 256; ++v) {
        cdf += hist[v];
        lut[v] = uint8_t(cdf * 255 / area);
    }
    return lut;
}

void clip_histogram(std::array<uint64_t, 256>& hist, uint64_t limit) {
    uint64_t excess = 0;
    for (auto& h : hist) {
        if (h > limit) {
            excess += h - limit;
            h = limit;
        }
    }
    const uint64_t per_bin = excess / 256;
    const uint64_t remainder = excess % 256;
    for (int v = 0; v < 256; ++v) hist[v] += per_bin + (uint64_t(v) < remainder ? 1 : 0);
}

}  // namespace

Grey8Image equalize_global(const Grey8Image& grey) {
    std::array<uint64_t, 256> hist{};
    for (uint8_t v : grey.pixels) ++hist[v];
    const Lut lut = lut_from_histogram(hist, grey.pixels.size());
    Grey8Image out = grey;
    for (auto& v : out.pixels) v = lut[v];
    return out;
}

ClaheResult clahe(const Grey8Image& grey, const ClaheParams& params) {
    const int w = grey.width;
    const int h = grey.height;
    const int tx = params.tiles_x;
    const int ty = params.tiles_y;

    if (w < tx || h < ty) return {equalize_global(grey), true};

    // Tile spans and centers.
    std::vector<int> xs(tx + 1), ys(ty + 1);
    for (int i = 0; i <= tx; ++i) xs[i] = i * w / tx;
    for (int j = 0; j <= ty; ++j) ys[j] = j * h / ty;
    std::vector<double> cx(tx), cy(ty);
    for (int i = 0; i < tx; ++i) cx[i] = (xs[i] + xs[i + 1]) / 2.0;
    for (int j = 0; j < ty; ++j) cy[j] = (ys[j] + ys[j + 1]) / 2.0;

    // Per-tile clipped-equalization luts.
    std::vector<Lut> luts(size_t(tx) * ty);
    for (int j = 0; j < ty; ++j) {
        for (int i = 0; i < tx; ++i) {
            std::array<uint64_t, 256> hist{};
            for (int y = ys[j]; y < ys[j + 1]; ++y)
                for (int x = xs[i]; x < xs[i + 1]; ++x) ++hist[grey.at(x, y)];
            const uint64_t area = uint64_t(xs[i + 1] - xs[i]) * uint64_t(ys[j + 1] - ys[j]);
            const uint64_t limit =
                std::max<uint64_t>(1, uint64_t(std::floor(params.clip_limit * double(area) / 256.0)));
            clip_histogram(hist, limit);
            luts[size_t(j) * tx + i] = lut_from_histogram(hist, area);
        }
    }

    // Bilinear interpolation between surrounding tile mappings.
    Grey8Image out = grey;
    for (int y = 0; y < h; ++y) {
        const double py = y + 0.5;
        int j0, j1;
        double fy;
        if (py <= cy[0]) {
            j0 = j1 = 0;
            fy = 0.0;
        } else if (py >= cy[ty - 1]) {
            j0 = j1 = ty - 1;
            fy = 0.0;
        } else {
            j0 = 0;
            while (py >= cy[j0 + 1]) ++j0;
            j1 = j0 + 1;
            fy = (py - cy[j0]) / (cy[j1] - cy[j0]);
        }
        for (int x = 0; x < w; ++x) {
            const double px = x + 0.5;
            int i0, i1;
            double fx;
            if (px <= cx[0]) {
                i0 = i1 = 0;
                fx = 0.0;
            } else if (px >= cx[tx - 1]) {
                i0 = i1 = tx - 1;
                fx = 0.0;
            } else {
                i0 = 0;
                while (px >= cx[i0 + 1]) ++i0;
                i1 = i0 + 1;
                fx = (px - cx[i0]) / (cx[i1] - cx[i0]);
            }
            const uint8_t v = grey.at(x, y);
            const double top = (1.0 - fx) * luts[size_t(j0) * tx + i0][v] +
                               fx * luts[size_t(j0) * tx + i1][v];
            const double bot = (1.0 - fx) * luts[size_t(j1) * tx + i0][v] +
                               fx * luts[size_t(j1) * tx + i1][v];
            const double z = (1.0 - fy) * top + fy * bot;
            out.at(x, y) = uint8_t(std::floor(z + 0.5));
        }
    }
    return {std::move(out), false};
}

Grey8Image adaptive_threshold(const Grey8Image& grey, const ThresholdParams& params) {
    const int w = grey.width;
    const int h = grey.height;
    const int r = params.window / 2;
    const double window_area = double(params.window) * double(params.window);

    // Edge-replicated box sums via a padded integral image.
    const int pw = w + 2 * r;
    const int ph = h + 2 * r;
    std::vector<uint64_t> integral(size_t(pw + 1) * (ph + 1), 0);
    auto at_clamped = [&](int x, int y) -> uint64_t {
        return grey.at(std::clamp(x - r, 0, w - 1), std::clamp(y - r, 0, h - 1));
    };
    for (int y = 0; y < ph; ++y) {
        uint64_t row = 0;
        for (int x = 0; x < pw; ++x) {
            row += at_clamped(x, y);
            integral[size_t(y + 1) * (pw + 1) + (x + 1)] =
                integral[size_t(y) * (pw + 1) + (x + 1)] + row;
        }
    }
    auto box_sum = [&](int x0, int y0, int x1, int y1) -> uint64_t {
        // inclusive coordinates in padded space
        return integral[size_t(y1 + 1) * (pw + 1) + (x1 + 1)] -
               integral[size_t(y0) * (pw + 1) + (x1 + 1)] -
               integral[size_t(y1 + 1) * (pw + 1) + x0] + integral[size_t(y0) * (pw + 1) + x0];
    };

    Grey8Image out = grey;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const uint64_t sum = box_sum(x, y, x + 2 * r, y + 2 * r);
            const double mean = double(sum) / window_area;
            out.at(x, y) = grey.at(x, y) > mean - params.offset_c ? 255 : 0;
        }
    }
    return out;
}

std::optional<BinarizedPatch> preprocess_region(const Frame& frame, const GraphicRegion& region,
                                                const PreprocessParams& params, Diagnostics& diag) {
    const BBox& b = region.bbox;
    if (b.w <= 0 || b.h <= 0) {
        diag.warn("detect", "zero-area region skipped", frame.index);
        return std::nullopt;
    }
    const Rgb8Image patch_rgb = crop(frame.image, b.x, b.y, b.w, b.h);
    const Grey8Image grey = to_greyscale(patch_rgb);
    ClaheResult enhanced = clahe(grey, params.clahe);
    if (enhanced.used_global_fallback)
        diag.warn("detect", "region smaller than CLAHE tile grid, global equalization used",
                  frame.index);
    BinarizedPatch patch;
    patch.image = adaptive_threshold(enhanced.image, params.threshold);
    patch.source_region = region;
    patch.frame_timestamp_s = frame.timestamp_s;
    patch.clahe_used_fallback = enhanced.used_global_fallback;
    return patch;
}

}  // namespace anep
