#include "anep/cluster.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "anep/unicode.hpp"

namespace anep {

const char* to_string(Combinator c) {
    switch (c) {
        case Combinator::Any: return "any";
        case Combinator::Majority: return "majority";
        case Combinator::All: return "all";
    }
    return "majority";
}

std::optional<Combinator> combinator_from_string(const std::string& s) {
    if (s == "any") return Combinator::Any;
    if (s == "majority") return Combinator::Majority;
    if (s == "all") return Combinator::All;
    return std::nullopt;
}

PairVerdict pair_similarities(const NameCandidate& a, const NameCandidate& b,
                              const SimilarityConfig& cfg, Embedder& embedder, Diagnostics& diag) {
    PairVerdict v;
    v.fuzzy = fuzzy_similarity(a.normalized, b.normalized);
    const std::set<std::string> ta(a.compare_tokens.begin(), a.compare_tokens.end());
    const std::set<std::string> tb(b.compare_tokens.begin(), b.compare_tokens.end());
    v.jaccard = jaccard_similarity(ta, tb);
    v.embedding = embedding_similarity(a.normalized, b.normalized, embedder, diag);

    const int votes = int(v.fuzzy >= cfg.fuzzy_threshold) + int(v.jaccard >= cfg.jaccard_threshold) +
                      int(v.embedding >= cfg.embedding_threshold);
    switch (cfg.combinator) {
        case Combinator::Any: v.linked = votes >= 1; break;
        case Combinator::Majority: v.linked = votes >= 2; break;
        case Combinator::All: v.linked = votes == 3; break;
    }
    return v;
}

bool pair_links(const NameCandidate& a, const NameCandidate& b, const SimilarityConfig& cfg,
                Embedder& embedder, Diagnostics& diag) {
    return pair_similarities(a, b, cfg, embedder, diag).linked;
}

Timeline build_timeline(std::vector<double> timestamps, double gap_tolerance_s,
                        double frame_duration_s) {
    Timeline tl;
    if (timestamps.empty()) return tl;
    std::sort(timestamps.begin(), timestamps.end());
    double start = timestamps[0];
    double end = timestamps[0] + frame_duration_s;
    for (size_t i = 1; i < timestamps.size(); ++i) {
        const double t = timestamps[i];
        if (t - end <= gap_tolerance_s) {
            end = std::max(end, t + frame_duration_s);
        } else {
            tl.intervals.emplace_back(start, end);
            start = t;
            end = t + frame_duration_s;
        }
    }
    tl.intervals.emplace_back(start, end);
    tl.first_s = tl.intervals.front().first;
    tl.last_s = tl.intervals.back().second;
    return tl;
}

namespace {

size_t codepoint_length(const std::string& s) { return uni::decode_utf8(s).size(); }

std::string stripped_surface(const NameCandidate& c) {
    std::string out;
    for (size_t i = 0; i < c.stripped_tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += c.stripped_tokens[i];
    }
    return out;
}

// Disjoint-set forest with path halving.
class UnionFind {
public:
    explicit UnionFind(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    size_t find(size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(size_t a, size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<size_t> parent_;
};

}  // namespace

std::string canonical_name(const std::vector<NameCandidate>& members) {
    std::map<std::string, int> freq;
    for (const auto& m : members) ++freq[stripped_surface(m)];
    std::string best;
    int best_count = -1;
    size_t best_len = 0;
    for (const auto& [form, count] : freq) {
        const size_t len = codepoint_length(form);
        const bool wins = count > best_count || (count == best_count && len > best_len) ||
                          (count == best_count && len == best_len && form < best);
        if (wins) {
            best = form;
            best_count = count;
            best_len = len;
        }
    }
    return best;
}

std::vector<NameCluster> cluster_names(const std::vector<NameCandidate>& candidates,
                                       const SimilarityConfig& cfg, Embedder& embedder,
                                       double gap_tolerance_s, double frame_duration_s,
                                       Diagnostics& diag) {
    const size_t n = candidates.size();
    UnionFind uf(n);

    // Identical keys always link; evaluating the full similarity set for
    // them would only re-derive 1.0 three times. The pairwise loop is the
    // cost center the runtime report attributes to this stage.
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (uf.find(i) == uf.find(j)) continue;
            if (candidates[i].normalized == candidates[j].normalized ||
                pair_links(candidates[i], candidates[j], cfg, embedder, diag))
                uf.unite(i, j);
        }
    }

    std::map<size_t, std::vector<size_t>> groups;
    for (size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);

    std::vector<NameCluster> clusters;
    clusters.reserve(groups.size());
    for (const auto& [root, indices] : groups) {
        NameCluster c;
        std::vector<double> times;
        for (size_t i : indices) {
            c.members.push_back(candidates[i]);
            times.push_back(candidates[i].timestamp_s);
        }
        c.canonical = canonical_name(c.members);
        c.timeline = build_timeline(std::move(times), gap_tolerance_s, frame_duration_s);
        clusters.push_back(std::move(c));
    }
    std::sort(clusters.begin(), clusters.end(), [](const NameCluster& a, const NameCluster& b) {
        if (a.timeline.first_s != b.timeline.first_s) return a.timeline.first_s < b.timeline.first_s;
        return a.canonical < b.canonical;
    });
    return clusters;
}

}  // namespace anep
