#pragma once

#include <map>
#include <string>
#include <vector>

#include "anep/audit.hpp"
#include "anep/cluster.hpp"
#include "anep/config.hpp"
#include "anep/evalharness.hpp"

namespace anep {

struct PipelineResult {
    std::vector<NameCluster> clusters;
    std::vector<Prediction> predictions;
    std::string predictions_path;
    std::string audit_path;
    std::string report_path;
    std::string artifacts_dir;
    double total_wall_s = 0.0;
    std::map<std::string, double> stage_seconds;
    size_t frames_loaded = 0;
    size_t frames_kept = 0;
    size_t regions = 0;
    size_t spans = 0;
    size_t candidates_accepted = 0;
    size_t candidates_rejected = 0;
};

// Executes ingest -> detect -> ocr -> entities -> cluster and writes
// predictions.json, audit.jsonl, report.txt, and the artifacts/ tree under
// out_dir. Per-item failures degrade as each stage specifies; fatal errors
// append a terminal audit record and rethrow. Output is identical for any
// worker count.
PipelineResult run_pipeline(const PipelineConfig& config, const std::string& out_dir);

// Walks the audit digest chain of a finished run: canonical name ->
// clusters artifact -> member candidates -> per-stage records back to frame
// indices. Returns the sorted distinct frame indices the name traces to;
// throws anep::Error when any link cannot be verified.
std::vector<long> trace_name(const std::string& out_dir, const std::string& canonical);

}  // namespace anep
