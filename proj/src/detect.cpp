#include "anep/detect.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anep/png_io.hpp"
#include "anep/subprocess.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace anep {

const char* to_string(GraphicCategory c) {
    switch (c) {
        case GraphicCategory::BreakingNews: return "BreakingNews";
        case GraphicCategory::DigitalOnScreen: return "DigitalOnScreen";
        case GraphicCategory::LowerThird: return "LowerThird";
        case GraphicCategory::Headline: return "Headline";
        case GraphicCategory::Ticker: return "Ticker";
        case GraphicCategory::OtherNewsGraphic: return "OtherNewsGraphic";
    }
    return "OtherNewsGraphic";
}

std::optional<GraphicCategory> graphic_category_from_string(const std::string& s) {
    static const std::pair<const char*, GraphicCategory> table[] = {
        {"BreakingNews", GraphicCategory::BreakingNews},
        {"DigitalOnScreen", GraphicCategory::DigitalOnScreen},
        {"LowerThird", GraphicCategory::LowerThird},
        {"Headline", GraphicCategory::Headline},
        {"Ticker", GraphicCategory::Ticker},
        {"OtherNewsGraphic", GraphicCategory::OtherNewsGraphic},
    };
    for (const auto& [name, cat] : table)
        if (s == name) return cat;
    return std::nullopt;
}

std::vector<RawDetection> parse_detections_json(const std::string& text, Diagnostics& diag,
                                                long frame_index) {
    json doc = json::parse(text);  // propagates json::parse_error to the adapter caller
    std::vector<RawDetection> out;
    if (!doc.is_object() || !doc.contains("detections") || !doc["detections"].is_array())
        throw Error("detections JSON missing \"detections\" array");
    for (const auto& d : doc["detections"]) {
        if (!d.is_object() || !d.contains("bbox") || !d.contains("category") ||
            !d.contains("confidence") || !d["bbox"].is_array() || d["bbox"].size() != 4) {
            diag.warn("detect", "malformed detection entry skipped", frame_index);
            continue;
        }
        const auto cat = graphic_category_from_string(d["category"].get<std::string>());
        if (!cat) {
            diag.warn("detect",
                      "unknown category \"" + d["category"].get<std::string>() + "\" skipped",
                      frame_index);
            continue;
        }
        RawDetection det;
        det.bbox = {d["bbox"][0].get<int>(), d["bbox"][1].get<int>(), d["bbox"][2].get<int>(),
                    d["bbox"][3].get<int>()};
        det.category = *cat;
        det.confidence = d["confidence"].get<double>();
        if (det.confidence < 0.0 || det.confidence > 1.0) {
            diag.warn("detect", "confidence out of [0,1] skipped", frame_index);
            continue;
        }
        out.push_back(det);
    }
    return out;
}

namespace {

class ScriptedDetector final : public DetectorAdapter {
public:
    explicit ScriptedDetector(std::string dir) : dir_(std::move(dir)) {}

    std::vector<RawDetection> detect(const Frame& frame) override {
        char name[32];
        std::snprintf(name, sizeof(name), "det_%06ld.json", frame.index);
        const fs::path path = fs::path(dir_) / name;
        std::ifstream in(path);
        if (!in) throw Error("scripted detector: missing fixture " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        Diagnostics local;
        auto dets = parse_detections_json(buf.str(), local, frame.index);
        // Fixture files are trusted inputs; malformed entries there are a
        // corpus bug, not a runtime condition.
        if (!local.empty()) throw Error("scripted detector: malformed fixture " + path.string());
        return dets;
    }

    std::string describe() const override { return "scripted:" + dir_; }

private:
    std::string dir_;
};

class CommandDetector final : public DetectorAdapter {
public:
    CommandDetector(std::vector<std::string> cmd, std::string scratch_dir)
        : cmd_(std::move(cmd)), scratch_dir_(std::move(scratch_dir)) {}

    std::vector<RawDetection> detect(const Frame& frame) override {
        std::string image_path = frame.source_path;
        if (image_path.empty()) {
            fs::create_directories(scratch_dir_);
            image_path =
                (fs::path(scratch_dir_) / ("frame_" + std::to_string(frame.index) + ".png"))
                    .string();
            write_png(image_path, frame.image);
        }
        std::vector<std::string> argv = cmd_;
        argv.push_back(image_path);
        const CommandResult res = run_command(argv);
        if (res.failed())
            throw Error("command detector exited with code " + std::to_string(res.exit_code));
        Diagnostics local;
        try {
            auto dets = parse_detections_json(res.output, local, frame.index);
            for (auto& d : local.items) d.stage = "detect";
            return dets;
        } catch (const json::exception& e) {
            throw Error(std::string("command detector produced invalid JSON: ") + e.what());
        }
    }

    std::string describe() const override {
        std::string joined;
        for (const auto& a : cmd_) joined += (joined.empty() ? "" : " ") + a;
        return "command:" + joined;
    }

private:
    std::vector<std::string> cmd_;
    std::string scratch_dir_;
};

}  // namespace

std::unique_ptr<DetectorAdapter> make_scripted_detector(const std::string& fixtures_dir) {
    return std::make_unique<ScriptedDetector>(fixtures_dir);
}

std::unique_ptr<DetectorAdapter> make_command_detector(const std::vector<std::string>& cmd,
                                                       const std::string& scratch_dir) {
    return std::make_unique<CommandDetector>(cmd, scratch_dir);
}

std::vector<GraphicRegion> detect_regions(const Frame& frame, DetectorAdapter& detector,
                                          double min_confidence, Diagnostics& diag) {
    std::vector<RawDetection> raw;
    try {
        raw = detector.detect(frame);
    } catch (const Error& e) {
        diag.error("detect", std::string("adapter failure, frame skipped: ") + e.what(),
                   frame.index);
        return {};
    } catch (const json::exception& e) {
        diag.error("detect", std::string("adapter output unparseable, frame skipped: ") + e.what(),
                   frame.index);
        return {};
    }

    std::vector<GraphicRegion> regions;
    for (const RawDetection& d : raw) {
        if (d.confidence < min_confidence) continue;
        // Clamp to frame bounds; adapters are allowed to be off-by-one at
        // the edges.
        const int x0 = std::clamp(d.bbox.x, 0, frame.image.width);
        const int y0 = std::clamp(d.bbox.y, 0, frame.image.height);
        const int x1 = std::clamp(d.bbox.x + d.bbox.w, x0, frame.image.width);
        const int y1 = std::clamp(d.bbox.y + d.bbox.h, y0, frame.image.height);
        GraphicRegion r;
        r.frame_index = frame.index;
        r.bbox = {x0, y0, x1 - x0, y1 - y0};
        r.category = d.category;
        r.confidence = d.confidence;
        regions.push_back(r);
    }
    std::sort(regions.begin(), regions.end(), [](const GraphicRegion& a, const GraphicRegion& b) {
        if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
        if (a.bbox.x != b.bbox.x) return a.bbox.x < b.bbox.x;
        if (a.bbox.w != b.bbox.w) return a.bbox.w < b.bbox.w;
        if (a.bbox.h != b.bbox.h) return a.bbox.h < b.bbox.h;
        return int(a.category) < int(b.category);
    });
    return regions;
}

}  // namespace anep
