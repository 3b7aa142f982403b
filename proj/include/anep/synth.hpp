#pragma once

#include <array>
#include <string>
#include <vector>

#include "anep/detect.hpp"
#include "anep/errors.hpp"
#include "anep/lexicons.hpp"

namespace anep {

using Rgb = std::array<uint8_t, 3>;

// One rendered overlay in a synthetic scene. Striped fills (period > 0)
// exist to make distinct scene states far apart in dHash space, so the
// dedup stage keeps exactly one frame per state.
struct SceneGraphic {
    GraphicCategory category = GraphicCategory::LowerThird;
    BBox bbox;
    std::string text;
    double start_s = 0.0;
    double end_s = 0.0;
    Rgb fg{255, 255, 255};
    Rgb bg{0, 0, 96};
    Rgb bg2{0, 0, 0};
    int stripe_period = 0;  // 0 = solid fill, else vertical stripes of bg/bg2
    bool person_name = false;
    double ocr_confidence = 91.0;
    double det_confidence = 0.9;
};

// Desk-scale stand-in for a real test video: flat-color frames, solid
// graphics, a 5x7 bitmap face for text. Ground truth falls out of the
// graphics flagged as person names.
struct SceneSpec {
    double duration_s = 60.0;
    double sample_rate = 1.0;
    int width = 640;
    int height = 360;
    Rgb background{24, 40, 56};
    Rgb background2{24, 40, 56};  // != background renders a horizontal gradient
    std::vector<SceneGraphic> graphics;

    static SceneSpec from_json(const std::string& json_text);
    static SceneSpec load(const std::string& path);
    std::string to_json() const;
};

struct SynthResult {
    int frames_written = 0;
    std::string frames_dir;
    std::string fixtures_dir;
    std::string ground_truth_path;
    std::string scene_path;
    std::string config_path;
};

// Renders the corpus under out_dir: frames/frame_%06d.png, fixtures/
// det_%06d.json + ocr_%06d.json, ground_truth.json, scene.json, and a
// ready-to-run pipeline config.json. Overlapping graphics are allowed but
// flagged with a warning.
SynthResult synth_corpus(const SceneSpec& spec, const std::string& out_dir, const Lexicons& lex,
                         Diagnostics& diag);

// Renders one frame of the scene at time t (exposed for tests).
Rgb8Image render_scene_frame(const SceneSpec& spec, double t);

}  // namespace anep
