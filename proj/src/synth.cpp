#include "anep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anep/config.hpp"
#include "anep/entities.hpp"
#include "anep/png_io.hpp"
#include "anep/unicode.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace anep {

namespace {

// 5x7 uppercase bitmap face; bit 4 is the leftmost column. Lowercase and
// accented letters render through their uppercase ASCII base; the scripted
// OCR fixtures carry the exact text, so glyph shape only has to be
// text-like for the preprocessing stages.
struct Glyph {
    char ch;
    uint8_t rows[7];
};

constexpr Glyph kFont[] = {
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
    {'D', {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}},
    {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}},
    {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}},
    {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x1B, 0x11}},
    {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04}},
    {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x06, 0x08, 0x10, 0x1F}},
    {'3', {0x0E, 0x11, 0x01, 0x06, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x08}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'\'', {0x0C, 0x04, 0x08, 0x00, 0x00, 0x00, 0x00}},
};

const uint8_t* glyph_rows(char c) {
    for (const auto& g : kFont)
        if (g.ch == c) return g.rows;
    return nullptr;
}

// Maps any codepoint to the glyph character used for rendering.
char render_char(char32_t cp) {
    const std::string folded = uni::fold_to_ascii(cp);
    if (folded.empty()) return '\0';
    char c = folded[0];
    if (c >= 'a' && c <= 'z') c = char(c - 32);
    return c;
}

void fill_rect(Rgb8Image& img, const BBox& b, Rgb color) {
    const int x0 = std::clamp(b.x, 0, img.width);
    const int y0 = std::clamp(b.y, 0, img.height);
    const int x1 = std::clamp(b.x + b.w, 0, img.width);
    const int y1 = std::clamp(b.y + b.h, 0, img.height);
    for (int y = y0; y < y1; ++y) {
        uint8_t* px = img.at(x0, y);
        for (int x = x0; x < x1; ++x, px += 3) {
            px[0] = color[0];
            px[1] = color[1];
            px[2] = color[2];
        }
    }
}

void draw_text(Rgb8Image& img, const BBox& box, const std::string& text, Rgb fg) {
    const std::u32string cps = uni::decode_utf8(text);
    const int scale = std::max(1, (box.h - 4) / 9);
    const int glyph_w = 6 * scale;  // 5 columns + 1 spacing
    const int glyph_h = 7 * scale;
    int pen_x = box.x + 2 * scale;
    const int pen_y = box.y + (box.h - glyph_h) / 2;
    for (char32_t cp : cps) {
        if (cp == U' ') {
            pen_x += glyph_w;
            continue;
        }
        const char rc = render_char(cp);
        const uint8_t* rows = rc ? glyph_rows(rc) : nullptr;
        if (rows) {
            for (int ry = 0; ry < 7; ++ry) {
                for (int rx = 0; rx < 5; ++rx) {
                    if (!(rows[ry] & (0x10 >> rx))) continue;
                    const BBox dot{pen_x + rx * scale, pen_y + ry * scale, scale, scale};
                    const BBox clipped{dot.x, dot.y,
                                       std::min(dot.w, box.x + box.w - dot.x),
                                       std::min(dot.h, box.y + box.h - dot.y)};
                    if (clipped.w > 0 && clipped.h > 0) fill_rect(img, clipped, fg);
                }
            }
        }
        pen_x += glyph_w;
        if (pen_x >= box.x + box.w) break;
    }
}

Rgb parse_rgb(const json& arr, const char* where) {
    if (!arr.is_array() || arr.size() != 3)
        throw Error(std::string("scene: ") + where + " must be [r,g,b]");
    return {arr[0].get<uint8_t>(), arr[1].get<uint8_t>(), arr[2].get<uint8_t>()};
}

bool boxes_overlap(const BBox& a, const BBox& b) {
    return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

}  // namespace

SceneSpec SceneSpec::from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("scene: invalid JSON: ") + e.what());
    }
    SceneSpec spec;
    spec.duration_s = doc.value("duration_s", spec.duration_s);
    spec.sample_rate = doc.value("sample_rate", spec.sample_rate);
    spec.width = doc.value("width", spec.width);
    spec.height = doc.value("height", spec.height);
    if (doc.contains("background")) spec.background = parse_rgb(doc["background"], "background");
    spec.background2 = spec.background;
    if (doc.contains("background2")) spec.background2 = parse_rgb(doc["background2"], "background2");
    if (spec.duration_s < 0 || spec.sample_rate <= 0 || spec.width < 1 || spec.height < 1)
        throw Error("scene: invalid dimensions or timing");
    for (const auto& g : doc.value("graphics", json::array())) {
        SceneGraphic sg;
        const auto cat = graphic_category_from_string(g.value("category", "LowerThird"));
        if (!cat) throw Error("scene: unknown category " + g.value("category", ""));
        sg.category = *cat;
        const auto& bb = g.at("bbox");
        sg.bbox = {bb[0].get<int>(), bb[1].get<int>(), bb[2].get<int>(), bb[3].get<int>()};
        sg.text = g.at("text").get<std::string>();
        sg.start_s = g.at("start_s").get<double>();
        sg.end_s = g.at("end_s").get<double>();
        if (g.contains("fg")) sg.fg = parse_rgb(g["fg"], "fg");
        if (g.contains("bg")) sg.bg = parse_rgb(g["bg"], "bg");
        if (g.contains("bg2")) sg.bg2 = parse_rgb(g["bg2"], "bg2");
        sg.stripe_period = g.value("stripe_period", 0);
        sg.person_name = g.value("person_name", false);
        sg.ocr_confidence = g.value("ocr_confidence", sg.ocr_confidence);
        sg.det_confidence = g.value("det_confidence", sg.det_confidence);
        spec.graphics.push_back(std::move(sg));
    }
    return spec;
}

SceneSpec SceneSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("scene: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::string SceneSpec::to_json() const {
    json doc;
    doc["schema_version"] = 1;
    doc["duration_s"] = duration_s;
    doc["sample_rate"] = sample_rate;
    doc["width"] = width;
    doc["height"] = height;
    doc["background"] = {background[0], background[1], background[2]};
    doc["background2"] = {background2[0], background2[1], background2[2]};
    json gs = json::array();
    for (const auto& g : graphics) {
        json e;
        e["category"] = to_string(g.category);
        e["bbox"] = {g.bbox.x, g.bbox.y, g.bbox.w, g.bbox.h};
        e["text"] = g.text;
        e["start_s"] = g.start_s;
        e["end_s"] = g.end_s;
        e["fg"] = {g.fg[0], g.fg[1], g.fg[2]};
        e["bg"] = {g.bg[0], g.bg[1], g.bg[2]};
        e["bg2"] = {g.bg2[0], g.bg2[1], g.bg2[2]};
        e["stripe_period"] = g.stripe_period;
        e["person_name"] = g.person_name;
        e["ocr_confidence"] = g.ocr_confidence;
        e["det_confidence"] = g.det_confidence;
        gs.push_back(e);
    }
    doc["graphics"] = gs;
    return doc.dump(2) + "\n";
}

Rgb8Image render_scene_frame(const SceneSpec& spec, double t) {
    Rgb8Image img;
    img.width = spec.width;
    img.height = spec.height;
    img.pixels.resize(size_t(spec.width) * spec.height * 3);
    for (int x = 0; x < spec.width; ++x) {
        const double f = spec.width > 1 ? double(x) / (spec.width - 1) : 0.0;
        const Rgb col{uint8_t(std::lround(spec.background[0] + f * (spec.background2[0] - spec.background[0]))),
                      uint8_t(std::lround(spec.background[1] + f * (spec.background2[1] - spec.background[1]))),
                      uint8_t(std::lround(spec.background[2] + f * (spec.background2[2] - spec.background[2])))};
        for (int y = 0; y < spec.height; ++y) {
            uint8_t* px = img.at(x, y);
            px[0] = col[0];
            px[1] = col[1];
            px[2] = col[2];
        }
    }
    for (const auto& g : spec.graphics) {
        if (t < g.start_s || t >= g.end_s) continue;
        if (g.stripe_period > 0) {
            for (int x = g.bbox.x; x < g.bbox.x + g.bbox.w; x += g.stripe_period) {
                const bool odd = ((x - g.bbox.x) / g.stripe_period) % 2 == 1;
                const BBox stripe{x, g.bbox.y, std::min(g.stripe_period, g.bbox.x + g.bbox.w - x),
                                  g.bbox.h};
                fill_rect(img, stripe, odd ? g.bg2 : g.bg);
            }
        } else {
            fill_rect(img, g.bbox, g.bg);
        }
        draw_text(img, g.bbox, g.text, g.fg);
    }
    return img;
}

SynthResult synth_corpus(const SceneSpec& spec, const std::string& out_dir, const Lexicons& lex,
                         Diagnostics& diag) {
    SynthResult result;
    const fs::path root(out_dir);
    const fs::path frames = root / "frames";
    const fs::path fixtures = root / "fixtures";
    fs::create_directories(frames);
    fs::create_directories(fixtures);
    result.frames_dir = frames.string();
    result.fixtures_dir = fixtures.string();

    for (size_t i = 0; i < spec.graphics.size(); ++i)
        for (size_t j = i + 1; j < spec.graphics.size(); ++j) {
            const auto& a = spec.graphics[i];
            const auto& b = spec.graphics[j];
            const bool temporal = a.start_s < b.end_s && b.start_s < a.end_s;
            if (temporal && boxes_overlap(a.bbox, b.bbox))
                diag.warn("synth", "graphics " + std::to_string(i) + " and " + std::to_string(j) +
                                       " overlap; merged-region behavior applies");
        }

    const long n_frames = long(std::floor(spec.duration_s * spec.sample_rate));
    for (long idx = 0; idx < n_frames; ++idx) {
        const double t = double(idx) / spec.sample_rate;
        const Rgb8Image frame = render_scene_frame(spec, t);
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06ld.png", idx);
        write_png((frames / name).string(), frame);

        json det;
        det["frame_index"] = idx;
        json dets = json::array();
        json ocr_regions = json::array();
        for (const auto& g : spec.graphics) {
            if (t < g.start_s || t >= g.end_s) continue;
            dets.push_back({{"bbox", {g.bbox.x, g.bbox.y, g.bbox.w, g.bbox.h}},
                            {"category", to_string(g.category)},
                            {"confidence", g.det_confidence}});
            json spans = json::array();
            spans.push_back({{"text", g.text},
                             {"confidence", g.ocr_confidence},
                             {"bbox", {2, 2, std::max(1, g.bbox.w - 4), std::max(1, g.bbox.h - 4)}}});
            ocr_regions.push_back(
                {{"bbox", {g.bbox.x, g.bbox.y, g.bbox.w, g.bbox.h}}, {"spans", spans}});
        }
        det["detections"] = dets;
        std::snprintf(name, sizeof(name), "det_%06ld.json", idx);
        std::ofstream(fixtures / name) << det.dump(2) << "\n";

        json ocr;
        ocr["frame_index"] = idx;
        ocr["regions"] = ocr_regions;
        std::snprintf(name, sizeof(name), "ocr_%06ld.json", idx);
        std::ofstream(fixtures / name) << ocr.dump(2) << "\n";
    }
    result.frames_written = int(n_frames);

    // Ground truth: one entry per distinct honorific-stripped person name,
    // spanning its earliest appearance to its latest disappearance.
    struct Span {
        double first;
        double last;
    };
    std::map<std::string, Span> gt;
    std::vector<std::string> gt_order;
    for (const auto& g : spec.graphics) {
        if (!g.person_name) continue;
        const NameCandidate c = NameCandidate::from_surface(g.text, lex);
        std::string derived;
        for (size_t i = 0; i < c.stripped_tokens.size(); ++i) {
            if (i) derived.push_back(' ');
            derived += c.stripped_tokens[i];
        }
        if (derived.empty()) {
            diag.warn("synth", "person-name graphic reduces to honorifics only: " + g.text);
            continue;
        }
        auto [it, inserted] = gt.emplace(derived, Span{g.start_s, g.end_s});
        if (inserted) {
            gt_order.push_back(derived);
        } else {
            it->second.first = std::min(it->second.first, g.start_s);
            it->second.last = std::max(it->second.last, g.end_s);
        }
    }
    json gt_doc = json::array();
    for (const auto& name : gt_order)
        gt_doc.push_back(
            {{"name", name}, {"first_s", gt.at(name).first}, {"last_s", gt.at(name).last}});
    result.ground_truth_path = (root / "ground_truth.json").string();
    std::ofstream(result.ground_truth_path) << gt_doc.dump(2) << "\n";

    result.scene_path = (root / "scene.json").string();
    std::ofstream(result.scene_path) << spec.to_json();

    PipelineConfig cfg;
    cfg.frames_dir = frames.string();
    cfg.sample_rate = spec.sample_rate;
    cfg.detector = {"scripted", fixtures.string(), ""};
    cfg.ocr = {"scripted", fixtures.string(), ""};
    result.config_path = (root / "config.json").string();
    std::ofstream(result.config_path) << cfg.to_json();

    return result;
}

}  // namespace anep
