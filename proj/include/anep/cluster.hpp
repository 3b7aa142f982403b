#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anep/entities.hpp"
#include "anep/similarity.hpp"

namespace anep {

enum class Combinator { Any, Majority, All };
const char* to_string(Combinator c);
std::optional<Combinator> combinator_from_string(const std::string& s);

// Thresholds for the three linking routes and the rule combining them.
// The embedding default (0.5 with the trigram backend) is set so that
// honorific variants of one name link under Majority while distinct
// surname-sharing names do not; see the alias regression tests.
struct SimilarityConfig {
    double fuzzy_threshold = 0.85;
    double jaccard_threshold = 0.5;
    double embedding_threshold = 0.5;
    Combinator combinator = Combinator::Majority;
};

struct PairVerdict {
    double fuzzy = 0.0;
    double jaccard = 0.0;
    double embedding = 0.0;
    bool linked = false;
};

// Evaluates the three similarities on the candidates' honorific-stripped,
// folded keys and combines the per-route threshold passes with the
// configured rule (Any >= 1, Majority >= 2, All = 3).
PairVerdict pair_similarities(const NameCandidate& a, const NameCandidate& b,
                              const SimilarityConfig& cfg, Embedder& embedder, Diagnostics& diag);
bool pair_links(const NameCandidate& a, const NameCandidate& b, const SimilarityConfig& cfg,
                Embedder& embedder, Diagnostics& diag);

// Merged on-screen intervals for one cluster. Intervals are sorted and
// pairwise disjoint; first_s/last_s bound them.
struct Timeline {
    std::vector<std::pair<double, double>> intervals;
    double first_s = 0.0;
    double last_s = 0.0;
};

// Each sighting at t spans [t, t + frame_duration_s); sightings whose gap is
// at most gap_tolerance_s merge into one interval.
Timeline build_timeline(std::vector<double> timestamps, double gap_tolerance_s,
                        double frame_duration_s);

struct NameCluster {
    std::vector<NameCandidate> members;
    std::string canonical;
    Timeline timeline;
};

// Most frequent honorific-stripped surface form; frequency ties go to the
// longest (in codepoints), remaining ties lexicographic.
std::string canonical_name(const std::vector<NameCandidate>& members);

// Union-find over every pair where pair_links holds; clusters ordered by
// first appearance then canonical name. The partition, canonicals, and
// timelines are invariant under permutation of the input.
std::vector<NameCluster> cluster_names(const std::vector<NameCandidate>& candidates,
                                       const SimilarityConfig& cfg, Embedder& embedder,
                                       double gap_tolerance_s, double frame_duration_s,
                                       Diagnostics& diag);

}  // namespace anep
