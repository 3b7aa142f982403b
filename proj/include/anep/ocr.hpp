#pragma once

#include <memory>
#include <string>
#include <vector>

#include "anep/errors.hpp"
#include "anep/preprocess.hpp"

namespace anep {

// One OCR result row. text is non-empty after trimming; confidence is on the
// adapter's 0-100 scale; bbox is relative to the patch.
struct TextSpan {
    std::string text;
    double confidence = 0.0;
    BBox bbox;
    GraphicRegion region;
    double frame_timestamp_s = 0.0;
};

// Seam for the OCR engine. Command adapters speak a TSV contract:
// `<cmd...> <image_path>`, one stdout line per span,
// `text<TAB>confidence<TAB>x,y,w,h`, exit 0.
class OcrAdapter {
public:
    virtual ~OcrAdapter() = default;

    struct RawSpan {
        std::string text;
        double confidence = 0.0;
        BBox bbox;
    };
    // Throws anep::Error on adapter failure; the patch is then skipped.
    virtual std::vector<RawSpan> recognize(const BinarizedPatch& patch,
                                           const std::string& patch_image_path) = 0;
    virtual std::string describe() const = 0;
};

// Scripted fixtures: ocr_%06d.json per frame, spans keyed by region bbox:
//   {"frame_index": int,
//    "regions": [{"bbox": [x,y,w,h],
//                 "spans": [{"text": "...", "confidence": 91.0,
//                            "bbox": [x,y,w,h]}]}]}
// A region without an entry yields no spans.
std::unique_ptr<OcrAdapter> make_scripted_ocr(const std::string& fixtures_dir);
std::unique_ptr<OcrAdapter> make_command_ocr(const std::vector<std::string>& cmd);

// Runs the adapter and enforces the span invariants: trimmed non-empty text,
// confidence in [0,100]. Malformed rows are rejected with a warning; adapter
// failure yields an empty list with a warning. Spans carry the region and
// frame timestamp provenance.
std::vector<TextSpan> extract_text(const BinarizedPatch& patch, OcrAdapter& engine,
                                   const std::string& patch_image_path, Diagnostics& diag);

// Keeps spans with confidence >= min_conf (inclusive), preserving order.
std::vector<TextSpan> filter_by_confidence(std::vector<TextSpan> spans, double min_conf);

}  // namespace anep
