#include "anep/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anep/entities.hpp"
#include "anep/errors.hpp"

using nlohmann::json;

namespace anep {

bool name_match(const std::string& pred, const std::string& gt, double fuzzy_min) {
    return fuzzy_similarity(fold_key(pred), fold_key(gt)) >= fuzzy_min;
}

bool temporal_overlap(const std::optional<Timeline>& pred, const GroundTruthEntry& gt,
                      double slack_s) {
    if (!pred) return true;
    const double lo = pred->first_s - slack_s;
    const double hi = pred->last_s + slack_s;
    return lo <= gt.last_s && gt.first_s <= hi;
}

Matching match_predictions(const std::vector<Prediction>& preds,
                           const std::vector<GroundTruthEntry>& gts, const EvalConfig& cfg) {
    struct CandidatePair {
        double similarity;
        size_t gt_index;
        size_t pred_index;
    };
    std::vector<CandidatePair> candidates;
    for (size_t p = 0; p < preds.size(); ++p) {
        for (size_t g = 0; g < gts.size(); ++g) {
            if (!name_match(preds[p].canonical, gts[g].name, cfg.fuzzy_min)) continue;
            if (!temporal_overlap(preds[p].timeline, gts[g], cfg.slack_s)) continue;
            const double sim =
                fuzzy_similarity(fold_key(preds[p].canonical), fold_key(gts[g].name));
            candidates.push_back({sim, g, p});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const CandidatePair& a, const CandidatePair& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        if (a.gt_index != b.gt_index) return a.gt_index < b.gt_index;
        return a.pred_index < b.pred_index;
    });

    Matching m;
    m.n_predictions = preds.size();
    m.n_ground_truth = gts.size();
    std::vector<bool> pred_used(preds.size(), false), gt_used(gts.size(), false);
    for (const auto& c : candidates) {
        if (pred_used[c.pred_index] || gt_used[c.gt_index]) continue;
        pred_used[c.pred_index] = true;
        gt_used[c.gt_index] = true;
        m.pairs.push_back({c.pred_index, c.gt_index, c.similarity});
    }
    return m;
}

double f1_from_pr(double p, double r) {
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

EvalReport compute_metrics(const Matching& matching, double runtime_s) {
    EvalReport rep;
    rep.true_positives = matching.true_positives();
    rep.false_positives = matching.false_positives();
    rep.false_negatives = matching.false_negatives();
    const double tp = double(rep.true_positives);
    const double p_den = tp + double(rep.false_positives);
    const double r_den = tp + double(rep.false_negatives);
    rep.precision = p_den == 0.0 ? 0.0 : 100.0 * tp / p_den;
    rep.recall = r_den == 0.0 ? 0.0 : 100.0 * tp / r_den;
    rep.f1 = f1_from_pr(rep.precision, rep.recall);
    rep.runtime_s = runtime_s;
    rep.matched_pairs = matching.pairs;
    return rep;
}

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error("invalid JSON in " + path + ": " + e.what());
    }
}

}  // namespace

std::vector<GroundTruthEntry> load_ground_truth(const std::string& path) {
    json doc = read_json_file(path);
    if (doc.is_object() && doc.contains("ground_truth")) doc = doc["ground_truth"];
    if (!doc.is_array()) throw Error("ground truth must be a JSON array: " + path);
    std::vector<GroundTruthEntry> out;
    for (const auto& e : doc) {
        GroundTruthEntry g;
        g.name = e.at("name").get<std::string>();
        g.first_s = e.at("first_s").get<double>();
        g.last_s = e.at("last_s").get<double>();
        if (g.name.empty()) throw Error("ground truth entry with empty name: " + path);
        if (g.first_s > g.last_s) throw Error("ground truth entry with first_s > last_s: " + path);
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<Prediction> load_predictions(const std::string& path) {
    json doc = read_json_file(path);
    if (doc.is_object() && doc.contains("predictions")) doc = doc["predictions"];
    if (!doc.is_array()) throw Error("predictions must be a JSON array: " + path);
    std::vector<Prediction> out;
    for (const auto& e : doc) {
        Prediction p;
        p.canonical = e.at("canonical").get<std::string>();
        if (e.contains("first_s") && e.contains("last_s") && !e["first_s"].is_null()) {
            Timeline tl;
            tl.first_s = e["first_s"].get<double>();
            tl.last_s = e["last_s"].get<double>();
            if (e.contains("intervals"))
                for (const auto& iv : e["intervals"])
                    tl.intervals.emplace_back(iv[0].get<double>(), iv[1].get<double>());
            else
                tl.intervals.emplace_back(tl.first_s, tl.last_s);
            p.timeline = std::move(tl);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::string report_to_json(const EvalReport& report) {
    json doc;
    doc["schema_version"] = 1;
    doc["precision"] = report.precision;
    doc["recall"] = report.recall;
    doc["f1"] = report.f1;
    doc["true_positives"] = report.true_positives;
    doc["false_positives"] = report.false_positives;
    doc["false_negatives"] = report.false_negatives;
    doc["runtime_s"] = report.runtime_s;
    json pairs = json::array();
    for (const auto& p : report.matched_pairs)
        pairs.push_back({{"pred_index", p.pred_index},
                         {"gt_index", p.gt_index},
                         {"similarity", p.similarity}});
    doc["matched_pairs"] = pairs;
    return doc.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& report, const std::vector<Prediction>& preds,
                            const std::vector<GroundTruthEntry>& gts) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "metric        value\n";
    out << "------------  --------\n";
    out << "precision     " << std::setw(7) << report.precision << "%\n";
    out << "recall        " << std::setw(7) << report.recall << "%\n";
    out << "f1            " << std::setw(7) << report.f1 << "%\n";
    out << "TP / FP / FN  " << report.true_positives << " / " << report.false_positives << " / "
        << report.false_negatives << "\n";
    out << "runtime       " << std::setw(7) << report.runtime_s << "s\n";
    if (!report.matched_pairs.empty()) {
        out << "\nmatched pairs (prediction <- ground truth, similarity):\n";
        for (const auto& p : report.matched_pairs) {
            out << "  " << preds[p.pred_index].canonical << "  <-  " << gts[p.gt_index].name
                << "  (" << std::setprecision(4) << p.similarity << std::setprecision(2) << ")\n";
        }
    }
    return out.str();
}

}  // namespace anep
