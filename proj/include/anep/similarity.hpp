#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "anep/errors.hpp"

namespace anep {

// Codepoint-level edit distance (insert/delete/substitute, unit costs).
size_t levenshtein(const std::string& a, const std::string& b);

// 1 - levenshtein(a,b) / max(|a|,|b|), over codepoints; 1.0 when both empty.
// Inputs are expected to be fold_key-normalized.
double fuzzy_similarity(const std::string& a, const std::string& b);

// |a n b| / |a u b|; 1.0 when both empty.
double jaccard_similarity(const std::set<std::string>& a, const std::set<std::string>& b);

// Bag of character trigrams over codepoints. Strings shorter than three
// codepoints contribute themselves as a single gram.
std::map<std::string, int> char_trigrams(const std::string& s);

// Cosine over trigram bags; 1.0 when both strings are empty, 0.0 when only
// one is.
double trigram_cosine(const std::string& a, const std::string& b);

// Pluggable embedding backend for the third similarity route.
class Embedder {
public:
    virtual ~Embedder() = default;
    // Throws anep::Error on backend failure.
    virtual double similarity(const std::string& a, const std::string& b) = 0;
    virtual std::string describe() const = 0;
};

// Deterministic, dependency-free default.
std::unique_ptr<Embedder> make_trigram_embedder();

// External embedding service: `<cmd...>` reads one string per line on stdin
// and emits one JSON float array per line on stdout. Similarity is the
// cosine of the two vectors, clamped to [0,1].
std::unique_ptr<Embedder> make_command_embedder(const std::vector<std::string>& cmd);

// Wrapper applying the stage-5 failure rule: backend failure counts as
// similarity 0 with a warning, never an abort.
double embedding_similarity(const std::string& a, const std::string& b, Embedder& embedder,
                            Diagnostics& diag);

}  // namespace anep
