// anep — deterministic extraction of on-screen personal names from news
// video frames, with an auditable per-stage trail.
//
// Subcommands:
//   run       execute the five-stage pipeline on a frame directory
//   eval      score predictions against ground truth
//   synth     generate a synthetic corpus (frames + fixtures + ground truth)
//   baseline  run the generative-endpoint extraction protocol
//   audit     inspect or trace a run's audit trail

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "anep/baseline.hpp"
#include "anep/config.hpp"
#include "anep/errors.hpp"
#include "anep/evalharness.hpp"
#include "anep/ingest.hpp"
#include "anep/pipeline.hpp"
#include "anep/synth.hpp"

namespace fs = std::filesystem;
using namespace anep;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir, int workers_override) {
    PipelineConfig config = PipelineConfig::load(config_path);
    if (workers_override >= 0) config.workers = workers_override;
    const PipelineResult result = run_pipeline(config, out_dir);
    std::cout << "frames " << result.frames_loaded << " -> kept " << result.frames_kept
              << ", clusters " << result.clusters.size() << ", total "
              << result.total_wall_s << " s\n";
    std::cout << "predictions: " << result.predictions_path << "\n";
    std::cout << "audit trail: " << result.audit_path << "\n";
    std::cout << "report:      " << result.report_path << "\n";
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gt_path, double fuzzy_min,
             double slack_s, const std::string& json_out) {
    const auto preds = load_predictions(pred_path);
    const auto gts = load_ground_truth(gt_path);
    EvalConfig cfg;
    cfg.fuzzy_min = fuzzy_min;
    cfg.slack_s = slack_s;
    const auto t0 = std::chrono::steady_clock::now();
    const Matching matching = match_predictions(preds, gts, cfg);
    const double runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const EvalReport report = compute_metrics(matching, runtime_s);
    std::cout << report_to_table(report, preds, gts);
    if (!json_out.empty()) {
        std::ofstream out(json_out, std::ios::trunc);
        if (!out) throw Error("cannot write " + json_out);
        out << report_to_json(report);
    }
    return 0;
}

// Demo scene used by `synth --demo`: four planted names (one with
// diacritics, one honorific variant), an all-caps ticker, striped graphic
// fills so scene changes clear the dedup threshold.
SceneSpec demo_scene() {
    SceneSpec spec;
    spec.duration_s = 60.0;
    spec.width = 640;
    spec.height = 360;
    spec.background = {20, 34, 48};

    auto lower_third = [](std::string text, double start, double end, Rgb bg, Rgb bg2,
                          bool person) {
        SceneGraphic g;
        g.category = GraphicCategory::LowerThird;
        g.bbox = {96, 264, 448, 64};
        g.text = std::move(text);
        g.start_s = start;
        g.end_s = end;
        g.bg = bg;
        g.bg2 = bg2;
        g.stripe_period = 56;
        g.person_name = person;
        return g;
    };

    spec.graphics.push_back(lower_third("Anna Borg", 3, 10, {176, 32, 32}, {240, 200, 56}, true));
    spec.graphics.push_back(
        lower_third("Ċensu Żahra", 14, 22, {24, 120, 48}, {220, 220, 220}, true));
    spec.graphics.push_back(
        lower_third("Donald Trump", 26, 33, {32, 48, 160}, {232, 120, 24}, true));
    SceneGraphic headline;
    headline.category = GraphicCategory::Headline;
    headline.bbox = {64, 40, 512, 72};
    headline.text = "Maria Vella";
    headline.start_s = 36;
    headline.end_s = 41;
    headline.bg = {120, 24, 120};
    headline.bg2 = {250, 250, 120};
    headline.stripe_period = 64;
    headline.person_name = true;
    spec.graphics.push_back(headline);
    spec.graphics.push_back(lower_third("President Donald Trump", 44, 50, {200, 140, 20},
                                        {20, 60, 130}, true));

    SceneGraphic ticker;
    ticker.category = GraphicCategory::Ticker;
    ticker.bbox = {0, 336, 640, 24};
    ticker.text = "ELECTION UPDATE";
    ticker.start_s = 0;
    ticker.end_s = 60;
    ticker.bg = {8, 8, 8};
    ticker.fg = {230, 230, 230};
    spec.graphics.push_back(ticker);
    return spec;
}

int cmd_synth(const std::string& scene_path, const std::string& out_dir, bool demo) {
    const SceneSpec spec = demo ? demo_scene() : SceneSpec::load(scene_path);
    Diagnostics diag;
    const SynthResult result = synth_corpus(spec, out_dir, Lexicons::builtin_default(), diag);
    for (const auto& d : diag.items) std::cerr << "warning: " << d.message << "\n";
    std::cout << "frames:       " << result.frames_written << " -> " << result.frames_dir << "\n";
    std::cout << "fixtures:     " << result.fixtures_dir << "\n";
    std::cout << "ground truth: " << result.ground_truth_path << "\n";
    std::cout << "run config:   " << result.config_path << "\n";
    return 0;
}

int cmd_baseline(const std::string& frames_dir, const std::string& config_path,
                 const std::string& out_dir, const std::string& mock_dir, int dedup_threshold,
                 double sample_rate) {
    const BaselineConfig config = BaselineConfig::load(config_path);
    Diagnostics diag;
    const std::vector<Frame> frames = load_frames(frames_dir, sample_rate, diag);
    fs::create_directories(out_dir);
    AuditTrail audit((fs::path(out_dir) / "audit.jsonl").string());

    std::unique_ptr<Transport> transport;
    if (!mock_dir.empty())
        transport = std::make_unique<MockTransport>(mock_dir);
    else
        transport = make_http_transport();

    const BaselineRunResult result =
        run_baseline(frames, dedup_threshold, config, *transport, out_dir, audit, diag);
    for (const auto& d : diag.items) std::cerr << "warning: " << d.message << "\n";
    std::cout << "requests: " << result.requests_sent << ", names: " << result.predictions.size()
              << "\n";
    std::cout << "predictions: " << (fs::path(out_dir) / "predictions.json").string() << "\n";
    return 0;
}

int cmd_audit_show(const std::string& trail_path, const std::string& stage, long frame,
                   size_t limit) {
    const auto records = AuditTrail::read_file(trail_path);
    size_t shown = 0;
    for (const auto& r : records) {
        if (!stage.empty() && r.stage != stage) continue;
        if (frame >= 0 && (!r.frame_index || *r.frame_index != frame)) continue;
        std::cout << r.to_json_line() << "\n";
        if (limit && ++shown >= limit) break;
    }
    return 0;
}

int cmd_audit_trace(const std::string& out_dir, const std::string& name) {
    const std::vector<long> frames = trace_name(out_dir, name);
    std::cout << "\"" << name << "\" traces to frame indices:";
    for (long f : frames) std::cout << " " << f;
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic on-screen name extraction pipeline"};
    app.require_subcommand(1);

    std::string config_path, out_dir, pred_path, gt_path, json_out, scene_path, frames_dir,
        mock_dir, trail_path, stage_filter, trace_target;
    int workers_override = -1;
    double fuzzy_min = 0.85, slack_s = 2.0, sample_rate = 1.0;
    int dedup_threshold = 10;
    long frame_filter = -1;
    size_t limit = 0;
    bool demo = false;

    auto* run = app.add_subcommand("run", "run the extraction pipeline");
    run->add_option("--config", config_path, "pipeline config JSON")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--workers", workers_override, "override worker count (0 = hardware)");

    auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
    eval->add_option("--pred", pred_path, "predictions JSON")->required();
    eval->add_option("--gt", gt_path, "ground truth JSON")->required();
    eval->add_option("--fuzzy-min", fuzzy_min, "name-match fuzzy tolerance");
    eval->add_option("--slack", slack_s, "temporal slack seconds");
    eval->add_option("--json", json_out, "also write the report as JSON");

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    synth->add_option("--scene", scene_path, "scene spec JSON");
    synth->add_option("--out", out_dir, "output directory")->required();
    synth->add_flag("--demo", demo, "use the built-in demo scene");

    auto* baseline = app.add_subcommand("baseline", "run the generative-endpoint protocol");
    baseline->add_option("--frames", frames_dir, "frame directory")->required();
    baseline->add_option("--config", config_path, "baseline config JSON")->required();
    baseline->add_option("--out", out_dir, "output directory")->required();
    baseline->add_option("--mock", mock_dir, "mock transport fixtures directory");
    baseline->add_option("--dedup", dedup_threshold, "dedup Hamming threshold");
    baseline->add_option("--sample-rate", sample_rate, "frame sample rate (fps)");

    auto* audit = app.add_subcommand("audit", "inspect audit trails");
    auto* show = audit->add_subcommand("show", "print audit records");
    show->add_option("--trail", trail_path, "audit.jsonl path")->required();
    show->add_option("--stage", stage_filter, "filter by stage");
    show->add_option("--frame", frame_filter, "filter by frame index");
    show->add_option("--limit", limit, "max records to print");
    auto* trace = audit->add_subcommand("trace", "trace a name back to frame indices");
    trace->add_option("--out", out_dir, "pipeline output directory")->required();
    trace->add_option("--name", trace_target, "canonical name")->required();
    audit->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, workers_override);
        if (eval->parsed()) return cmd_eval(pred_path, gt_path, fuzzy_min, slack_s, json_out);
        if (synth->parsed()) {
            if (!demo && scene_path.empty()) {
                std::cerr << "synth: provide --scene or --demo\n";
                return 1;
            }
            return cmd_synth(scene_path, out_dir, demo);
        }
        if (baseline->parsed())
            return cmd_baseline(frames_dir, config_path, out_dir, mock_dir, dedup_threshold,
                                sample_rate);
        if (audit->parsed()) {
            if (show->parsed()) return cmd_audit_show(trail_path, stage_filter, frame_filter, limit);
            if (trace->parsed()) return cmd_audit_trace(out_dir, trace_target);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
