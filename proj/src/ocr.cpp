#include "anep/ocr.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anep/subprocess.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace anep {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

class ScriptedOcr final : public OcrAdapter {
public:
    explicit ScriptedOcr(std::string dir) : dir_(std::move(dir)) {}

    std::vector<RawSpan> recognize(const BinarizedPatch& patch, const std::string&) override {
        char name[32];
        std::snprintf(name, sizeof(name), "ocr_%06ld.json", patch.source_region.frame_index);
        const fs::path path = fs::path(dir_) / name;
        std::ifstream in(path);
        if (!in) throw Error("scripted ocr: missing fixture " + path.string());
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            throw Error("scripted ocr: bad fixture " + path.string() + ": " + e.what());
        }
        std::vector<RawSpan> out;
        if (!doc.contains("regions")) return out;
        for (const auto& r : doc["regions"]) {
            const auto& bb = r["bbox"];
            const BBox fixture_box{bb[0].get<int>(), bb[1].get<int>(), bb[2].get<int>(),
                                   bb[3].get<int>()};
            if (!(fixture_box == patch.source_region.bbox)) continue;
            for (const auto& s : r["spans"]) {
                RawSpan span;
                span.text = s["text"].get<std::string>();
                span.confidence = s["confidence"].get<double>();
                if (s.contains("bbox")) {
                    const auto& sb = s["bbox"];
                    span.bbox = {sb[0].get<int>(), sb[1].get<int>(), sb[2].get<int>(),
                                 sb[3].get<int>()};
                }
                out.push_back(std::move(span));
            }
        }
        return out;
    }

    std::string describe() const override { return "scripted:" + dir_; }

private:
    std::string dir_;
};

class CommandOcr final : public OcrAdapter {
public:
    explicit CommandOcr(std::vector<std::string> cmd) : cmd_(std::move(cmd)) {}

    std::vector<RawSpan> recognize(const BinarizedPatch&, const std::string& image_path) override {
        if (image_path.empty()) throw Error("command ocr: no patch image available");
        std::vector<std::string> argv = cmd_;
        argv.push_back(image_path);
        const CommandResult res = run_command(argv);
        if (res.failed())
            throw Error("command ocr exited with code " + std::to_string(res.exit_code));

        std::vector<RawSpan> out;
        std::istringstream lines(res.output);
        std::string line;
        while (std::getline(lines, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const size_t t1 = line.find('\t');
            const size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
            if (t1 == std::string::npos || t2 == std::string::npos)
                throw Error("command ocr: malformed TSV line: " + line);
            RawSpan span;
            span.text = line.substr(0, t1);
            span.confidence = std::stod(line.substr(t1 + 1, t2 - t1 - 1));
            const std::string coords = line.substr(t2 + 1);
            int x, y, w, h;
            if (std::sscanf(coords.c_str(), "%d,%d,%d,%d", &x, &y, &w, &h) != 4)
                throw Error("command ocr: malformed bbox: " + coords);
            span.bbox = {x, y, w, h};
            out.push_back(std::move(span));
        }
        return out;
    }

    std::string describe() const override {
        std::string joined;
        for (const auto& a : cmd_) joined += (joined.empty() ? "" : " ") + a;
        return "command:" + joined;
    }

private:
    std::vector<std::string> cmd_;
};

}  // namespace

std::unique_ptr<OcrAdapter> make_scripted_ocr(const std::string& fixtures_dir) {
    return std::make_unique<ScriptedOcr>(fixtures_dir);
}

std::unique_ptr<OcrAdapter> make_command_ocr(const std::vector<std::string>& cmd) {
    return std::make_unique<CommandOcr>(cmd);
}

std::vector<TextSpan> extract_text(const BinarizedPatch& patch, OcrAdapter& engine,
                                   const std::string& patch_image_path, Diagnostics& diag) {
    std::vector<OcrAdapter::RawSpan> raw;
    try {
        raw = engine.recognize(patch, patch_image_path);
    } catch (const Error& e) {
        diag.warn("ocr", std::string("adapter failure, patch skipped: ") + e.what(),
                  patch.source_region.frame_index);
        return {};
    } catch (const std::exception& e) {
        diag.warn("ocr", std::string("adapter output malformed, patch skipped: ") + e.what(),
                  patch.source_region.frame_index);
        return {};
    }

    std::vector<TextSpan> spans;
    for (auto& r : raw) {
        const std::string text = trim(r.text);
        if (text.empty()) {
            diag.warn("ocr", "empty span rejected", patch.source_region.frame_index);
            continue;
        }
        if (r.confidence < 0.0 || r.confidence > 100.0) {
            diag.warn("ocr", "span confidence outside [0,100] rejected",
                      patch.source_region.frame_index);
            continue;
        }
        TextSpan span;
        span.text = text;
        span.confidence = r.confidence;
        span.bbox = r.bbox;
        span.region = patch.source_region;
        span.frame_timestamp_s = patch.frame_timestamp_s;
        spans.push_back(std::move(span));
    }
    return spans;
}

std::vector<TextSpan> filter_by_confidence(std::vector<TextSpan> spans, double min_conf) {
    std::erase_if(spans, [min_conf](const TextSpan& s) { return s.confidence < min_conf; });
    return spans;
}

}  // namespace anep
