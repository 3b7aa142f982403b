#include "anep/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anep/subprocess.hpp"
#include "anep/unicode.hpp"

using nlohmann::json;

namespace anep {

size_t levenshtein(const std::string& a, const std::string& b) {
    const std::u32string s = uni::decode_utf8(a);
    const std::u32string t = uni::decode_utf8(b);
    if (s == t) return 0;
    if (s.empty()) return t.size();
    if (t.empty()) return s.size();

    std::vector<size_t> prev(t.size() + 1), cur(t.size() + 1);
    for (size_t j = 0; j <= t.size(); ++j) prev[j] = j;
    for (size_t i = 0; i < s.size(); ++i) {
        cur[0] = i + 1;
        for (size_t j = 0; j < t.size(); ++j) {
            const size_t cost = s[i] == t[j] ? 0 : 1;
            cur[j + 1] = std::min({cur[j] + 1, prev[j + 1] + 1, prev[j] + cost});
        }
        std::swap(prev, cur);
    }
    return prev[t.size()];
}

double fuzzy_similarity(const std::string& a, const std::string& b) {
    const size_t la = uni::decode_utf8(a).size();
    const size_t lb = uni::decode_utf8(b).size();
    const size_t longest = std::max(la, lb);
    if (longest == 0) return 1.0;
    return 1.0 - double(levenshtein(a, b)) / double(longest);
}

double jaccard_similarity(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    const size_t uni_size = a.size() + b.size() - inter;
    return double(inter) / double(uni_size);
}

std::map<std::string, int> char_trigrams(const std::string& s) {
    std::map<std::string, int> bag;
    const std::u32string cps = uni::decode_utf8(s);
    if (cps.empty()) return bag;
    if (cps.size() < 3) {
        ++bag[uni::encode_utf8(cps)];
        return bag;
    }
    for (size_t i = 0; i + 3 <= cps.size(); ++i)
        ++bag[uni::encode_utf8(cps.substr(i, 3))];
    return bag;
}

double trigram_cosine(const std::string& a, const std::string& b) {
    const auto ba = char_trigrams(a);
    const auto bb = char_trigrams(b);
    if (ba.empty() && bb.empty()) return 1.0;
    if (ba.empty() || bb.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [gram, count] : ba) {
        na += double(count) * count;
        auto it = bb.find(gram);
        if (it != bb.end()) dot += double(count) * it->second;
    }
    for (const auto& [gram, count] : bb) nb += double(count) * count;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

class TrigramEmbedder final : public Embedder {
public:
    double similarity(const std::string& a, const std::string& b) override {
        return std::clamp(trigram_cosine(a, b), 0.0, 1.0);
    }
    std::string describe() const override { return "trigram-cosine"; }
};

class CommandEmbedder final : public Embedder {
public:
    explicit CommandEmbedder(std::vector<std::string> cmd) : cmd_(std::move(cmd)) {}

    double similarity(const std::string& a, const std::string& b) override {
        const CommandResult res = run_command(cmd_, a + "\n" + b + "\n");
        if (res.failed())
            throw Error("embedding adapter exited with code " + std::to_string(res.exit_code));
        std::istringstream lines(res.output);
        std::string la, lb;
        if (!std::getline(lines, la) || !std::getline(lines, lb))
            throw Error("embedding adapter: expected two output lines");
        const std::vector<double> va = parse_vector(la);
        const std::vector<double> vb = parse_vector(lb);
        if (va.size() != vb.size() || va.empty())
            throw Error("embedding adapter: vector size mismatch");
        double dot = 0.0, na = 0.0, nb = 0.0;
        for (size_t i = 0; i < va.size(); ++i) {
            dot += va[i] * vb[i];
            na += va[i] * va[i];
            nb += vb[i] * vb[i];
        }
        if (na == 0.0 || nb == 0.0) return 0.0;
        return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
    }

    std::string describe() const override {
        std::string joined;
        for (const auto& a : cmd_) joined += (joined.empty() ? "" : " ") + a;
        return "command:" + joined;
    }

private:
    static std::vector<double> parse_vector(const std::string& line) {
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(std::string("embedding adapter: invalid JSON line: ") + e.what());
        }
        if (!doc.is_array()) throw Error("embedding adapter: expected a JSON array per line");
        std::vector<double> v;
        v.reserve(doc.size());
        for (const auto& x : doc) v.push_back(x.get<double>());
        return v;
    }

    std::vector<std::string> cmd_;
};

}  // namespace

std::unique_ptr<Embedder> make_trigram_embedder() { return std::make_unique<TrigramEmbedder>(); }

std::unique_ptr<Embedder> make_command_embedder(const std::vector<std::string>& cmd) {
    return std::make_unique<CommandEmbedder>(cmd);
}

double embedding_similarity(const std::string& a, const std::string& b, Embedder& embedder,
                            Diagnostics& diag) {
    try {
        return embedder.similarity(a, b);
    } catch (const Error& e) {
        diag.warn("cluster", std::string("embedder failure, similarity treated as 0: ") + e.what());
        return 0.0;
    }
}

}  // namespace anep
