#include "anep/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "anep/detect.hpp"
#include "anep/dhash.hpp"
#include "anep/digest.hpp"
#include "anep/entities.hpp"
#include "anep/ingest.hpp"
#include "anep/ocr.hpp"
#include "anep/parallel.hpp"
#include "anep/png_io.hpp"
#include "anep/preprocess.hpp"
#include "anep/subprocess.hpp"
#include "anep/textnorm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace anep {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string frame_digest(const Frame& f) {
    std::string blob = "rgb8:" + std::to_string(f.image.width) + "x" +
                       std::to_string(f.image.height) + ":";
    blob.append(reinterpret_cast<const char*>(f.image.pixels.data()), f.image.pixels.size());
    return sha256_hex(blob);
}

std::string patch_digest(const Grey8Image& img) {
    std::string blob =
        "grey8:" + std::to_string(img.width) + "x" + std::to_string(img.height) + ":";
    blob.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return sha256_hex(blob);
}

json region_to_json(const GraphicRegion& r) {
    return {{"frame_index", r.frame_index},
            {"bbox", {r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h}},
            {"category", to_string(r.category)},
            {"confidence", r.confidence}};
}

json span_to_json(const TextSpan& s) {
    return {{"text", s.text},
            {"confidence", s.confidence},
            {"bbox", {s.bbox.x, s.bbox.y, s.bbox.w, s.bbox.h}},
            {"region", region_to_json(s.region)},
            {"frame_timestamp_s", s.frame_timestamp_s}};
}

json candidate_to_json(const NameCandidate& c) {
    json links = json::array();
    for (const auto& l : c.provenance)
        links.push_back(
            {{"stage", l.stage}, {"input_digest", l.input_digest}, {"params_digest", l.params_digest}});
    return {{"surface", c.surface},
            {"normalized", c.normalized},
            {"tokens", c.tokens},
            {"stripped_tokens", c.stripped_tokens},
            {"timestamp_s", c.timestamp_s},
            {"source_confidence", c.source_confidence},
            {"source", c.source},
            {"frame_index", c.frame_index},
            {"provenance", links}};
}

// Digest-named artifact store. Writes go through a unique temp file and an
// atomic rename, so concurrent workers producing the same digest are safe.
class ArtifactStore {
public:
    explicit ArtifactStore(std::string dir) : dir_(std::move(dir)) {
        fs::create_directories(dir_);
    }

    std::string path_for(const std::string& digest, const char* ext) const {
        return (fs::path(dir_) / (digest + ext)).string();
    }

    std::string put(const std::string& digest, const char* ext, const std::string& bytes) const {
        const std::string final_path = path_for(digest, ext);
        if (fs::exists(final_path)) return final_path;
        static std::atomic<uint64_t> counter{0};
        const std::string tmp =
            final_path + ".tmp" + std::to_string(counter.fetch_add(1));
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(bytes.data(), std::streamsize(bytes.size()));
        }
        fs::rename(tmp, final_path);
        return final_path;
    }

    const std::string& dir() const { return dir_; }

private:
    std::string dir_;
};

struct SpanWork {
    std::string span_digest;
    std::vector<NameCandidate> accepted;
    std::vector<std::pair<std::string, VerdictReason>> rejected;  // surface, reason
    double wall_ms = 0.0;
};

struct RegionWork {
    GraphicRegion region;
    std::string patch_digest_hex;
    std::string spans_digest_hex;
    size_t n_spans_raw = 0;
    size_t n_spans_kept = 0;
    std::vector<SpanWork> spans;
    double preprocess_ms = 0.0;
    double ocr_ms = 0.0;
    bool clahe_fallback = false;
};

struct FrameWork {
    long frame_index = 0;
    std::string frame_digest_hex;
    std::string regions_digest_hex;
    size_t n_regions = 0;
    std::vector<RegionWork> regions;
    double detect_ms = 0.0;
    Diagnostics diag;
};

void drain_diags(AuditTrail& audit, const Diagnostics& diag, const std::string& params) {
    for (const auto& d : diag.items) {
        AuditRecord r;
        r.stage = d.stage;
        if (d.frame_index >= 0) r.frame_index = d.frame_index;
        r.params_digest = params;
        r.message = std::string(d.severity == Severity::Error ? "error: " : "warning: ") +
                    d.message;
        audit.append(std::move(r));
    }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const std::string& out_dir) {
    config.validate();
    fs::create_directories(out_dir);
    const auto run_start = Clock::now();

    PipelineResult result;
    result.predictions_path = (fs::path(out_dir) / "predictions.json").string();
    result.audit_path = (fs::path(out_dir) / "audit.jsonl").string();
    result.report_path = (fs::path(out_dir) / "report.txt").string();
    ArtifactStore artifacts((fs::path(out_dir) / "artifacts").string());
    result.artifacts_dir = artifacts.dir();

    AuditTrail audit(result.audit_path);
    const std::string params = config.digest();

    const Lexicons lexicons = config.lexicons_path.empty()
                                  ? Lexicons::builtin_default()
                                  : Lexicons::load(config.lexicons_path);
    const RepairTable repairs = config.repair_table_path.empty()
                                    ? RepairTable::builtin_default()
                                    : RepairTable::load(config.repair_table_path);

    audit.append({0, "run", std::nullopt, "", params, params,
                  "start; lexicons=" + lexicons.digest() + " repairs=" + repairs.digest(), 0.0});

    try {
        // Stage 1: ingest + dedup.
        auto t0 = Clock::now();
        Diagnostics ingest_diag;
        std::vector<Frame> frames;
        if (!config.decoder_command.empty()) {
            frames = load_frames_via_decoder(split_command(config.decoder_command),
                                             config.decoder_input, config.frames_dir,
                                             config.sample_rate, ingest_diag);
        } else {
            frames = load_frames(config.frames_dir, config.sample_rate, ingest_diag);
        }
        drain_diags(audit, ingest_diag, params);
        result.frames_loaded = frames.size();

        std::vector<std::string> frame_digests(frames.size());
        {
            const std::function<std::string(size_t)> hash_one = [&](size_t i) {
                return frame_digest(frames[i]);
            };
            frame_digests = parallel_map<std::string>(frames.size(), config.workers, hash_one);
        }
        for (size_t i = 0; i < frames.size(); ++i)
            audit.append({0, "ingest", frames[i].index, "", frame_digests[i], params,
                          "frame loaded t=" + std::to_string(frames[i].timestamp_s), 0.0});

        std::vector<FrameHash> hashes(frames.size());
        for (size_t i = 0; i < frames.size(); ++i) hashes[i] = perceptual_hash(frames[i]);
        const std::vector<size_t> kept = deduplicate_hashes(hashes, config.dedup_threshold);
        std::string kept_blob, all_blob;
        for (size_t i = 0; i < frames.size(); ++i) all_blob += frame_digests[i];
        std::vector<Frame> kept_frames;
        std::vector<std::string> kept_digests;
        for (size_t i : kept) {
            kept_blob += frame_digests[i];
            kept_frames.push_back(std::move(frames[i]));
            kept_digests.push_back(frame_digests[i]);
        }
        result.frames_kept = kept_frames.size();
        audit.append({0, "ingest", std::nullopt, sha256_hex(all_blob), sha256_hex(kept_blob),
                      params,
                      "deduplicate kept " + std::to_string(kept.size()) + " of " +
                          std::to_string(result.frames_loaded) + " threshold " +
                          std::to_string(config.dedup_threshold),
                      ms_since(t0)});
        result.stage_seconds["ingest"] = ms_since(t0) / 1000.0;

        // Stages 2-4 per kept frame, parallel; audit appended in frame order.
        t0 = Clock::now();
        std::unique_ptr<DetectorAdapter> detector =
            config.detector.kind == "scripted"
                ? make_scripted_detector(config.detector.fixtures_dir)
                : make_command_detector(split_command(config.detector.command),
                                        (fs::path(out_dir) / "scratch").string());
        std::unique_ptr<OcrAdapter> ocr_engine =
            config.ocr.kind == "scripted" ? make_scripted_ocr(config.ocr.fixtures_dir)
                                          : make_command_ocr(split_command(config.ocr.command));
        std::unique_ptr<NerAdapter> ner;
        if (!config.ner_command.empty()) ner = make_command_ner(split_command(config.ner_command));
        std::unique_ptr<Embedder> embedder =
            config.embedder_command.empty()
                ? make_trigram_embedder()
                : make_command_embedder(split_command(config.embedder_command));

        const std::function<FrameWork(size_t)> process_frame = [&](size_t fi) {
            const Frame& frame = kept_frames[fi];
            FrameWork work;
            work.frame_index = frame.index;
            work.frame_digest_hex = kept_digests[fi];

            const auto td = Clock::now();
            std::vector<GraphicRegion> regions =
                detect_regions(frame, *detector, config.min_det_conf, work.diag);
            work.detect_ms = ms_since(td);
            json regions_json = json::array();
            for (const auto& r : regions) regions_json.push_back(region_to_json(r));
            work.regions_digest_hex = sha256_hex(regions_json.dump());
            work.n_regions = regions.size();

            for (const GraphicRegion& region : regions) {
                RegionWork rw;
                rw.region = region;

                const auto tp = Clock::now();
                auto patch = preprocess_region(frame, region, config.preprocess, work.diag);
                rw.preprocess_ms = ms_since(tp);
                if (!patch) continue;
                rw.clahe_fallback = patch->clahe_used_fallback;
                rw.patch_digest_hex = patch_digest(patch->image);
                const std::vector<uint8_t> png = encode_png_grey(patch->image);
                const std::string patch_path = artifacts.put(
                    rw.patch_digest_hex, ".png",
                    std::string(reinterpret_cast<const char*>(png.data()), png.size()));

                const auto to = Clock::now();
                std::vector<TextSpan> spans =
                    extract_text(*patch, *ocr_engine, patch_path, work.diag);
                rw.n_spans_raw = spans.size();
                for (auto& s : spans) s.text = normalize_text(s.text, repairs);
                std::erase_if(spans, [&](const TextSpan& s) {
                    if (s.text.empty()) {
                        work.diag.warn("ocr", "span empty after normalization, dropped",
                                       frame.index);
                        return true;
                    }
                    return false;
                });
                spans = filter_by_confidence(std::move(spans), config.ocr_min_confidence);
                rw.n_spans_kept = spans.size();
                rw.ocr_ms = ms_since(to);

                json spans_json = json::array();
                for (const auto& s : spans) spans_json.push_back(span_to_json(s));
                rw.spans_digest_hex = sha256_hex(spans_json.dump());
                artifacts.put(rw.spans_digest_hex, ".json", spans_json.dump(2) + "\n");

                for (const TextSpan& span : spans) {
                    SpanWork sw;
                    const auto te = Clock::now();
                    sw.span_digest = sha256_hex(span_to_json(span).dump());
                    std::vector<NameCandidate> candidates = recognize_entities(
                        span, lexicons, config.entities, ner.get(), work.diag);
                    for (NameCandidate& c : candidates) {
                        c.provenance = {
                            {"ingest", work.frame_digest_hex, params},
                            {"detect", rw.patch_digest_hex, params},
                            {"ocr", sw.span_digest, params},
                        };
                        const ValidationVerdict verdict =
                            validate_name(c, lexicons, config.entities);
                        if (verdict.accepted)
                            sw.accepted.push_back(std::move(c));
                        else
                            sw.rejected.emplace_back(c.surface, verdict.reason);
                    }
                    sw.wall_ms = ms_since(te);
                    rw.spans.push_back(std::move(sw));
                }
                work.regions.push_back(std::move(rw));
            }
            return work;
        };
        const std::vector<FrameWork> frame_work =
            parallel_map<FrameWork>(kept_frames.size(), config.workers, process_frame);

        std::vector<NameCandidate> all_candidates;
        for (const FrameWork& work : frame_work) {
            drain_diags(audit, work.diag, params);
            audit.append({0, "detect", work.frame_index, work.frame_digest_hex,
                          work.regions_digest_hex, params,
                          std::to_string(work.n_regions) + " regions", work.detect_ms});
            for (const RegionWork& rw : work.regions) {
                result.regions += 1;
                std::ostringstream bbox;
                bbox << "bbox=[" << rw.region.bbox.x << "," << rw.region.bbox.y << ","
                     << rw.region.bbox.w << "," << rw.region.bbox.h << "]";
                audit.append({0, "detect", work.frame_index, work.frame_digest_hex,
                              rw.patch_digest_hex, params,
                              "preprocess " + bbox.str() + " category=" +
                                  to_string(rw.region.category) +
                                  (rw.clahe_fallback ? " clahe=global-fallback" : ""),
                              rw.preprocess_ms});
                audit.append({0, "ocr", work.frame_index, rw.patch_digest_hex,
                              rw.spans_digest_hex, params,
                              std::to_string(rw.n_spans_raw) + " spans, " +
                                  std::to_string(rw.n_spans_kept) + " after confidence filter",
                              rw.ocr_ms});
                for (const SpanWork& sw : rw.spans) {
                    result.spans += 1;
                    json accepted_json = json::array();
                    for (const auto& c : sw.accepted) accepted_json.push_back(candidate_to_json(c));
                    std::ostringstream msg;
                    msg << sw.accepted.size() << " accepted";
                    for (const auto& [surface, reason] : sw.rejected)
                        msg << "; rejected \"" << surface << "\" " << to_string(reason);
                    audit.append({0, "entities", work.frame_index, sw.span_digest,
                                  sha256_hex(accepted_json.dump()), params, msg.str(),
                                  sw.wall_ms});
                    result.candidates_rejected += sw.rejected.size();
                    for (const auto& c : sw.accepted) all_candidates.push_back(c);
                }
            }
        }
        result.candidates_accepted = all_candidates.size();
        result.stage_seconds["detect+ocr+entities"] = ms_since(t0) / 1000.0;

        // Stage 5: cluster + timelines.
        t0 = Clock::now();
        json candidates_json = json::array();
        for (const auto& c : all_candidates) candidates_json.push_back(candidate_to_json(c));
        const std::string candidates_digest = sha256_hex(candidates_json.dump());
        artifacts.put(candidates_digest, ".json", candidates_json.dump(2) + "\n");

        Diagnostics cluster_diag;
        result.clusters =
            cluster_names(all_candidates, config.similarity, *embedder, config.gap_tolerance_s,
                          1.0 / config.sample_rate, cluster_diag);
        drain_diags(audit, cluster_diag, params);

        json clusters_json = json::array();
        for (const auto& cl : result.clusters) {
            json members = json::array();
            for (const auto& m : cl.members) members.push_back(candidate_to_json(m));
            json intervals = json::array();
            for (const auto& [s, e] : cl.timeline.intervals) intervals.push_back({s, e});
            clusters_json.push_back({{"canonical", cl.canonical},
                                     {"first_s", cl.timeline.first_s},
                                     {"last_s", cl.timeline.last_s},
                                     {"intervals", intervals},
                                     {"members", members}});
        }
        const std::string clusters_digest = sha256_hex(clusters_json.dump());
        artifacts.put(clusters_digest, ".json", clusters_json.dump(2) + "\n");

        json predictions = json::array();
        for (const auto& cl : result.clusters) {
            json intervals = json::array();
            for (const auto& [s, e] : cl.timeline.intervals) intervals.push_back({s, e});
            predictions.push_back({{"canonical", cl.canonical},
                                   {"first_s", cl.timeline.first_s},
                                   {"last_s", cl.timeline.last_s},
                                   {"intervals", intervals}});
            Prediction p;
            p.canonical = cl.canonical;
            p.timeline = cl.timeline;
            result.predictions.push_back(std::move(p));
        }
        json predictions_doc;
        predictions_doc["schema_version"] = 1;
        predictions_doc["predictions"] = predictions;
        const std::string predictions_text = predictions_doc.dump(2) + "\n";
        {
            std::ofstream out(result.predictions_path, std::ios::binary | std::ios::trunc);
            out << predictions_text;
        }
        audit.append({0, "cluster", std::nullopt, candidates_digest,
                      sha256_hex(predictions_text), params,
                      std::to_string(result.clusters.size()) +
                          " clusters; clusters_artifact=" + clusters_digest,
                      ms_since(t0)});
        result.stage_seconds["cluster"] = ms_since(t0) / 1000.0;

        result.total_wall_s = std::chrono::duration<double>(Clock::now() - run_start).count();
        audit.append({0, "run", std::nullopt, params, sha256_hex(predictions_text), params,
                      "complete; frames=" + std::to_string(result.frames_loaded) + " kept=" +
                          std::to_string(result.frames_kept) + " regions=" +
                          std::to_string(result.regions) + " spans=" +
                          std::to_string(result.spans) + " clusters=" +
                          std::to_string(result.clusters.size()),
                      result.total_wall_s * 1000.0});
    } catch (const std::exception& e) {
        audit.append({0, "run", std::nullopt, params, "", params,
                      std::string("fatal: ") + e.what(), ms_since(run_start)});
        throw;
    }

    // Human-readable report.
    std::ostringstream rep;
    rep << std::fixed << std::setprecision(2);
    rep << "name extraction run report\n";
    rep << "==========================\n";
    rep << "frames loaded      " << result.frames_loaded << "\n";
    rep << "frames kept        " << result.frames_kept << "\n";
    rep << "regions            " << result.regions << "\n";
    rep << "text spans         " << result.spans << "\n";
    rep << "names accepted     " << result.candidates_accepted << "\n";
    rep << "names rejected     " << result.candidates_rejected << "\n";
    rep << "clusters           " << result.clusters.size() << "\n\n";
    rep << "timeline\n--------\n";
    for (const auto& cl : result.clusters) {
        rep << "  " << std::left << std::setw(28) << cl.canonical << std::right << std::setw(8)
            << cl.timeline.first_s << " .. " << std::setw(8) << cl.timeline.last_s << "  ";
        for (const auto& [s, e] : cl.timeline.intervals) rep << "[" << s << "," << e << ") ";
        rep << "\n";
    }
    rep << "\nstage wall time\n---------------\n";
    for (const auto& [stage, seconds] : result.stage_seconds)
        rep << "  " << std::left << std::setw(22) << stage << std::right << std::setw(10)
            << seconds << " s\n";
    rep << "  " << std::left << std::setw(22) << "total" << std::right << std::setw(10)
        << result.total_wall_s << " s\n";
    {
        std::ofstream out(result.report_path, std::ios::trunc);
        out << rep.str();
    }
    return result;
}

std::vector<long> trace_name(const std::string& out_dir, const std::string& canonical) {
    const std::string audit_path = (fs::path(out_dir) / "audit.jsonl").string();
    const std::vector<AuditRecord> records = AuditTrail::read_file(audit_path);

    // Locate the clustering record and its clusters artifact.
    std::string clusters_digest;
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
        if (it->stage != "cluster") continue;
        const std::string marker = "clusters_artifact=";
        const size_t pos = it->message.find(marker);
        if (pos == std::string::npos) continue;
        clusters_digest = it->message.substr(pos + marker.size());
        break;
    }
    if (clusters_digest.empty()) throw Error("trace: no cluster record in " + audit_path);

    const std::string artifact_path =
        (fs::path(out_dir) / "artifacts" / (clusters_digest + ".json")).string();
    std::ifstream in(artifact_path);
    if (!in) throw Error("trace: missing clusters artifact " + artifact_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    {
        // The artifact must still hash to its recorded digest.
        json doc = json::parse(text);
        if (sha256_hex(doc.dump()) != clusters_digest)
            throw Error("trace: clusters artifact digest mismatch");
    }

    const json clusters = json::parse(text);
    std::set<long> frames;
    bool found = false;
    for (const auto& cl : clusters) {
        if (cl.at("canonical").get<std::string>() != canonical) continue;
        found = true;
        for (const auto& m : cl.at("members")) {
            const long frame_index = m.at("frame_index").get<long>();
            std::string ingest_digest, patch_digest_hex, span_digest;
            for (const auto& link : m.at("provenance")) {
                const std::string stage = link.at("stage").get<std::string>();
                if (stage == "ingest") ingest_digest = link.at("input_digest").get<std::string>();
                if (stage == "detect") patch_digest_hex = link.at("input_digest").get<std::string>();
                if (stage == "ocr") span_digest = link.at("input_digest").get<std::string>();
            }
            auto has_record = [&](auto pred) {
                return std::any_of(records.begin(), records.end(), pred);
            };
            if (!has_record([&](const AuditRecord& r) {
                    return r.stage == "ingest" && r.frame_index == frame_index &&
                           r.output_digest == ingest_digest;
                }))
                throw Error("trace: broken ingest link for frame " + std::to_string(frame_index));
            if (!has_record([&](const AuditRecord& r) {
                    return r.stage == "detect" && r.frame_index == frame_index &&
                           r.output_digest == patch_digest_hex;
                }))
                throw Error("trace: broken detect link for frame " + std::to_string(frame_index));
            if (!has_record([&](const AuditRecord& r) {
                    return r.stage == "entities" && r.frame_index == frame_index &&
                           r.input_digest == span_digest;
                }))
                throw Error("trace: broken ocr/entities link for frame " +
                            std::to_string(frame_index));
            frames.insert(frame_index);
        }
    }
    if (!found) throw Error("trace: canonical name not found: " + canonical);
    return {frames.begin(), frames.end()};
}

}  // namespace anep
