#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anep/errors.hpp"
#include "anep/frame.hpp"

namespace anep {

// The six news-graphic categories.
enum class GraphicCategory {
    BreakingNews,
    DigitalOnScreen,
    LowerThird,
    Headline,
    Ticker,
    OtherNewsGraphic,
};

const char* to_string(GraphicCategory c);
std::optional<GraphicCategory> graphic_category_from_string(const std::string& s);

struct BBox {
    int x = 0, y = 0, w = 0, h = 0;
    friend bool operator==(const BBox&, const BBox&) = default;
};

// A classified graphic region on one frame. The bbox is clamped to frame
// bounds before use; zero-area boxes are dropped later with a warning.
struct GraphicRegion {
    long frame_index = 0;
    BBox bbox;
    GraphicCategory category = GraphicCategory::OtherNewsGraphic;
    double confidence = 0.0;  // in [0, 1]
};

// Raw adapter output before clamping/filtering.
struct RawDetection {
    BBox bbox;
    GraphicCategory category = GraphicCategory::OtherNewsGraphic;
    double confidence = 0.0;
};

// Seam for the external detector. The trained model stays outside the repo;
// scripted fixtures and external commands both speak the same JSON schema:
//   {"frame_index": int,
//    "detections": [{"bbox": [x, y, w, h], "category": "<name>",
//                    "confidence": float}]}
class DetectorAdapter {
public:
    virtual ~DetectorAdapter() = default;
    // Throws anep::Error on adapter failure (missing fixture, non-zero exit,
    // unparseable output). Callers degrade to skipping the frame.
    virtual std::vector<RawDetection> detect(const Frame& frame) = 0;
    virtual std::string describe() const = 0;
};

// Reads det_%06d.json fixture files from a directory, keyed by frame index.
std::unique_ptr<DetectorAdapter> make_scripted_detector(const std::string& fixtures_dir);

// Invokes `<cmd...> <image_path>` and parses the detections schema from
// stdout. Frames loaded from disk pass their own path; in-memory frames are
// written to a scratch PNG first.
std::unique_ptr<DetectorAdapter> make_command_detector(const std::vector<std::string>& cmd,
                                                       const std::string& scratch_dir);

// Parses one detections-schema JSON document (shared by both adapters).
std::vector<RawDetection> parse_detections_json(const std::string& text, Diagnostics& diag,
                                                long frame_index);

// Runs the adapter for one frame, then applies the deterministic cleanup:
// clamp bboxes to the frame, drop detections below min_confidence, sort by
// (y, x, w, h, category). Adapter failure is reported through diag and
// yields an empty list.
std::vector<GraphicRegion> detect_regions(const Frame& frame, DetectorAdapter& detector,
                                          double min_confidence, Diagnostics& diag);

}  // namespace anep
