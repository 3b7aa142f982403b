#include "anep/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anep/digest.hpp"
#include "anep/errors.hpp"

using nlohmann::json;

namespace anep {

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!known.count(key))
            throw Error("config: unknown key \"" + key + "\" in " + where);
}

AdapterSpec parse_adapter(const json& obj, const std::string& where) {
    reject_unknown_keys(obj, {"kind", "fixtures_dir", "command"}, where);
    AdapterSpec spec;
    spec.kind = obj.value("kind", "scripted");
    spec.fixtures_dir = obj.value("fixtures_dir", "");
    spec.command = obj.value("command", "");
    if (spec.kind != "scripted" && spec.kind != "command")
        throw Error("config: " + where + ".kind must be \"scripted\" or \"command\"");
    if (spec.kind == "scripted" && spec.fixtures_dir.empty())
        throw Error("config: " + where + " needs fixtures_dir");
    if (spec.kind == "command" && spec.command.empty())
        throw Error("config: " + where + " needs command");
    return spec;
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error("config: expected a JSON object");

    reject_unknown_keys(doc,
                        {"schema_version", "frames_dir", "decoder", "sample_rate",
                         "dedup_threshold", "detector", "min_det_conf", "ocr",
                         "ocr_min_confidence", "ner_command", "entities", "clahe", "threshold",
                         "similarity", "embedder_command", "gap_tolerance_s", "eval",
                         "lexicons_path", "repair_table_path", "workers"},
                        "top level");

    PipelineConfig cfg;
    cfg.frames_dir = doc.value("frames_dir", "");
    if (doc.contains("decoder")) {
        reject_unknown_keys(doc["decoder"], {"command", "input"}, "decoder");
        cfg.decoder_command = doc["decoder"].value("command", "");
        cfg.decoder_input = doc["decoder"].value("input", "");
    }
    cfg.sample_rate = doc.value("sample_rate", cfg.sample_rate);
    cfg.dedup_threshold = doc.value("dedup_threshold", cfg.dedup_threshold);
    if (doc.contains("detector")) cfg.detector = parse_adapter(doc["detector"], "detector");
    cfg.min_det_conf = doc.value("min_det_conf", cfg.min_det_conf);
    if (doc.contains("ocr")) cfg.ocr = parse_adapter(doc["ocr"], "ocr");
    cfg.ocr_min_confidence = doc.value("ocr_min_confidence", cfg.ocr_min_confidence);
    cfg.ner_command = doc.value("ner_command", "");

    if (doc.contains("entities")) {
        reject_unknown_keys(doc["entities"], {"allow_single_surname", "max_tokens"}, "entities");
        cfg.entities.allow_single_surname =
            doc["entities"].value("allow_single_surname", cfg.entities.allow_single_surname);
        cfg.entities.max_tokens = doc["entities"].value("max_tokens", cfg.entities.max_tokens);
    }
    if (doc.contains("clahe")) {
        reject_unknown_keys(doc["clahe"], {"clip_limit", "tiles"}, "clahe");
        cfg.preprocess.clahe.clip_limit =
            doc["clahe"].value("clip_limit", cfg.preprocess.clahe.clip_limit);
        if (doc["clahe"].contains("tiles")) {
            const auto& t = doc["clahe"]["tiles"];
            if (!t.is_array() || t.size() != 2)
                throw Error("config: clahe.tiles must be [tx, ty]");
            cfg.preprocess.clahe.tiles_x = t[0].get<int>();
            cfg.preprocess.clahe.tiles_y = t[1].get<int>();
        }
    }
    if (doc.contains("threshold")) {
        reject_unknown_keys(doc["threshold"], {"window", "offset_c"}, "threshold");
        cfg.preprocess.threshold.window =
            doc["threshold"].value("window", cfg.preprocess.threshold.window);
        cfg.preprocess.threshold.offset_c =
            doc["threshold"].value("offset_c", cfg.preprocess.threshold.offset_c);
    }
    if (doc.contains("similarity")) {
        reject_unknown_keys(doc["similarity"],
                            {"fuzzy_threshold", "jaccard_threshold", "embedding_threshold",
                             "combinator"},
                            "similarity");
        cfg.similarity.fuzzy_threshold =
            doc["similarity"].value("fuzzy_threshold", cfg.similarity.fuzzy_threshold);
        cfg.similarity.jaccard_threshold =
            doc["similarity"].value("jaccard_threshold", cfg.similarity.jaccard_threshold);
        cfg.similarity.embedding_threshold =
            doc["similarity"].value("embedding_threshold", cfg.similarity.embedding_threshold);
        if (doc["similarity"].contains("combinator")) {
            const auto c = combinator_from_string(doc["similarity"]["combinator"]);
            if (!c)
                throw Error("config: similarity.combinator must be any|majority|all");
            cfg.similarity.combinator = *c;
        }
    }
    cfg.embedder_command = doc.value("embedder_command", "");
    cfg.gap_tolerance_s = doc.value("gap_tolerance_s", cfg.gap_tolerance_s);
    if (doc.contains("eval")) {
        reject_unknown_keys(doc["eval"], {"fuzzy_min", "slack_s"}, "eval");
        cfg.eval.fuzzy_min = doc["eval"].value("fuzzy_min", cfg.eval.fuzzy_min);
        cfg.eval.slack_s = doc["eval"].value("slack_s", cfg.eval.slack_s);
    }
    cfg.lexicons_path = doc.value("lexicons_path", "");
    cfg.repair_table_path = doc.value("repair_table_path", "");
    cfg.workers = doc.value("workers", cfg.workers);

    cfg.validate();
    return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void PipelineConfig::validate() const {
    if (sample_rate <= 0.0) throw Error("config: sample_rate must be > 0");
    if (dedup_threshold < 0 || dedup_threshold > 64)
        throw Error("config: dedup_threshold must be in [0,64]");
    if (min_det_conf < 0.0 || min_det_conf > 1.0)
        throw Error("config: min_det_conf must be in [0,1]");
    if (ocr_min_confidence < 0.0 || ocr_min_confidence > 100.0)
        throw Error("config: ocr_min_confidence must be in [0,100]");
    if (preprocess.clahe.clip_limit < 1.0) throw Error("config: clahe.clip_limit must be >= 1");
    if (preprocess.clahe.tiles_x < 1 || preprocess.clahe.tiles_y < 1)
        throw Error("config: clahe.tiles must be >= 1");
    if (preprocess.threshold.window < 1 || preprocess.threshold.window % 2 == 0)
        throw Error("config: threshold.window must be odd and >= 1");
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(similarity.fuzzy_threshold) || !in01(similarity.jaccard_threshold) ||
        !in01(similarity.embedding_threshold))
        throw Error("config: similarity thresholds must be in [0,1]");
    if (gap_tolerance_s < 0.0) throw Error("config: gap_tolerance_s must be >= 0");
    if (!in01(eval.fuzzy_min)) throw Error("config: eval.fuzzy_min must be in [0,1]");
    if (eval.slack_s < 0.0) throw Error("config: eval.slack_s must be >= 0");
    if (entities.max_tokens < 1) throw Error("config: entities.max_tokens must be >= 1");
    if (workers < 0) throw Error("config: workers must be >= 0");
}

std::string PipelineConfig::to_json() const {
    json doc;
    doc["schema_version"] = 1;
    doc["frames_dir"] = frames_dir;
    if (!decoder_command.empty())
        doc["decoder"] = {{"command", decoder_command}, {"input", decoder_input}};
    doc["sample_rate"] = sample_rate;
    doc["dedup_threshold"] = dedup_threshold;
    doc["detector"] = {{"kind", detector.kind},
                       {"fixtures_dir", detector.fixtures_dir},
                       {"command", detector.command}};
    doc["min_det_conf"] = min_det_conf;
    doc["ocr"] = {{"kind", ocr.kind}, {"fixtures_dir", ocr.fixtures_dir}, {"command", ocr.command}};
    doc["ocr_min_confidence"] = ocr_min_confidence;
    doc["ner_command"] = ner_command;
    doc["entities"] = {{"allow_single_surname", entities.allow_single_surname},
                       {"max_tokens", entities.max_tokens}};
    doc["clahe"] = {{"clip_limit", preprocess.clahe.clip_limit},
                    {"tiles", {preprocess.clahe.tiles_x, preprocess.clahe.tiles_y}}};
    doc["threshold"] = {{"window", preprocess.threshold.window},
                        {"offset_c", preprocess.threshold.offset_c}};
    doc["similarity"] = {{"fuzzy_threshold", similarity.fuzzy_threshold},
                         {"jaccard_threshold", similarity.jaccard_threshold},
                         {"embedding_threshold", similarity.embedding_threshold},
                         {"combinator", to_string(similarity.combinator)}};
    doc["embedder_command"] = embedder_command;
    doc["gap_tolerance_s"] = gap_tolerance_s;
    doc["eval"] = {{"fuzzy_min", eval.fuzzy_min}, {"slack_s", eval.slack_s}};
    doc["lexicons_path"] = lexicons_path;
    doc["repair_table_path"] = repair_table_path;
    doc["workers"] = workers;
    return doc.dump(2) + "\n";
}

std::string PipelineConfig::digest() const {
    // workers is execution topology, not semantics: two runs differing only
    // in worker count must produce identical audit digests.
    PipelineConfig canon = *this;
    canon.workers = 1;
    return sha256_hex(canon.to_json());
}

}  // namespace anep
