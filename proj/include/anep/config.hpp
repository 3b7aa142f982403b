#pragma once

#include <string>
#include <vector>

#include "anep/cluster.hpp"
#include "anep/entities.hpp"
#include "anep/evalharness.hpp"
#include "anep/preprocess.hpp"

namespace anep {

struct AdapterSpec {
    std::string kind;         // "scripted" | "command" (detector, ocr)
    std::string fixtures_dir; // scripted
    std::string command;      // command (whitespace-split argv)
};

// Full run configuration. Loaded from JSON with strict key checking:
// unknown keys anywhere are rejected so a typo cannot silently fall back to
// a default. digest() canonicalizes the effective values, and that digest is
// stamped into every audit record as params_digest.
struct PipelineConfig {
    std::string frames_dir;
    std::string decoder_command;  // optional: `<cmd> <input> <outdir> <fps>`
    std::string decoder_input;

    double sample_rate = 1.0;
    int dedup_threshold = 10;

    AdapterSpec detector{"scripted", "", ""};
    double min_det_conf = 0.25;

    AdapterSpec ocr{"scripted", "", ""};
    double ocr_min_confidence = 60.0;

    std::string ner_command;  // empty = heuristic backend only
    EntityConfig entities;

    PreprocessParams preprocess;

    SimilarityConfig similarity;
    std::string embedder_command;  // empty = trigram default
    double gap_tolerance_s = 3.0;

    EvalConfig eval;

    std::string lexicons_path;      // empty = builtin seed lists
    std::string repair_table_path;  // empty = builtin table

    int workers = 1;

    static PipelineConfig from_json(const std::string& json_text);
    static PipelineConfig load(const std::string& path);
    std::string to_json() const;  // canonical dump of effective values
    std::string digest() const;
    void validate() const;  // range checks; throws anep::Error
};

}  // namespace anep
