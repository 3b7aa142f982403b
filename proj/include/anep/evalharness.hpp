#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anep/cluster.hpp"

namespace anep {

// One ground-truth person with first/last on-screen timestamps.
struct GroundTruthEntry {
    std::string name;
    double first_s = 0.0;
    double last_s = 0.0;
};

// A predicted canonical name. Predictions without timestamps (generative
// baselines may omit them) match any ground-truth interval.
struct Prediction {
    std::string canonical;
    std::optional<Timeline> timeline;
};

struct EvalConfig {
    double fuzzy_min = 0.85;  // name-match tolerance on folded keys
    double slack_s = 2.0;     // temporal slack absorbing sampling quantization
};

// Case-insensitive fuzzy name equality:
// fuzzy_similarity(fold_key(pred), fold_key(gt)) >= fuzzy_min.
bool name_match(const std::string& pred, const std::string& gt, double fuzzy_min);

// True iff [first_s - slack, last_s + slack] intersects [gt.first_s,
// gt.last_s], boundaries inclusive. A missing timeline matches any entry.
bool temporal_overlap(const std::optional<Timeline>& pred, const GroundTruthEntry& gt,
                      double slack_s);

struct MatchedPair {
    size_t pred_index = 0;
    size_t gt_index = 0;
    double similarity = 0.0;
};

struct Matching {
    std::vector<MatchedPair> pairs;
    size_t n_predictions = 0;
    size_t n_ground_truth = 0;
    size_t true_positives() const { return pairs.size(); }
    size_t false_positives() const { return n_predictions - pairs.size(); }
    size_t false_negatives() const { return n_ground_truth - pairs.size(); }
};

// Candidate pairs pass both name_match and temporal_overlap; assignment is
// greedy one-to-one in descending fuzzy-similarity order (ties by ground-
// truth order, then prediction order). Unmerged duplicate predictions of one
// person therefore count as false positives.
Matching match_predictions(const std::vector<Prediction>& preds,
                           const std::vector<GroundTruthEntry>& gts, const EvalConfig& cfg);

struct EvalReport {
    double precision = 0.0;  // percent, unrounded
    double recall = 0.0;
    double f1 = 0.0;
    size_t true_positives = 0;
    size_t false_positives = 0;
    size_t false_negatives = 0;
    double runtime_s = 0.0;
    std::vector<MatchedPair> matched_pairs;
};

// Harmonic mean of two percentages; 0 when p + r == 0.
double f1_from_pr(double p, double r);

EvalReport compute_metrics(const Matching& matching, double runtime_s);

// JSON interchange. Ground truth: [{"name", "first_s", "last_s"}].
// Predictions: [{"canonical", "first_s", "last_s", "intervals"}] or the
// versioned object the pipeline writes; both load.
std::vector<GroundTruthEntry> load_ground_truth(const std::string& path);
std::vector<Prediction> load_predictions(const std::string& path);

std::string report_to_json(const EvalReport& report);
// Aligned plain-text table with percentages rounded to two decimals.
std::string report_to_table(const EvalReport& report, const std::vector<Prediction>& preds,
                            const std::vector<GroundTruthEntry>& gts);

}  // namespace anep
