#pragma once

#include <memory>
#include <string>
#include <vector>

#include "anep/errors.hpp"
#include "anep/lexicons.hpp"
#include "anep/ocr.hpp"

namespace anep {

// Lowercase, diacritic-folded, whitespace-collapsed comparison key.
// Idempotent; "Żahra" -> "zahra", "John  SMITH" -> "john smith".
std::string fold_key(const std::string& surface);

// Removes leading tokens found in the honorific lexicon (repeatedly, so
// ["Dr","Dr","Who"] -> ["Who"]). Tokens are matched by folded key.
std::vector<std::string> strip_honorifics(std::vector<std::string> tokens, const Lexicons& lex);

// One digest-chain step recorded while a candidate moves through the stages.
struct ProvenanceLink {
    std::string stage;
    std::string input_digest;
    std::string params_digest;
};

// A person-name candidate with full provenance. The surface form is never
// mutated downstream: display fidelity (diacritics, casing) survives to the
// final report. Comparison fields are derived once, here.
struct NameCandidate {
    std::string surface;                         // as displayed
    std::vector<std::string> tokens;             // surface split on whitespace
    std::vector<std::string> stripped_tokens;    // display tokens after honorific stripping
    std::vector<std::string> compare_tokens;     // folded stripped tokens
    std::string normalized;                      // folded honorific-stripped key
    double timestamp_s = 0.0;
    double source_confidence = 0.0;              // OCR confidence carried through, [0,100]
    std::string source = "heuristic";            // "heuristic" | "ner-adapter" | "both"
    long frame_index = -1;
    std::vector<ProvenanceLink> provenance;

    static NameCandidate from_surface(const std::string& surface, const Lexicons& lex,
                                      double timestamp_s = 0.0, double confidence = 0.0);
};

enum class VerdictReason {
    Ok,
    HonorificOnly,
    AmbiguousSingleSurname,
    Stoplist,
    AllCapsGraphic,
    TooManyTokens,
    NonLetter,
};
const char* to_string(VerdictReason r);

struct ValidationVerdict {
    bool accepted = false;
    VerdictReason reason = VerdictReason::Ok;  // Ok iff accepted
};

struct EntityConfig {
    bool allow_single_surname = false;  // "Trump"-type single surnames default to rejection
    int max_tokens = 5;
};

// Deterministic, total validation of one candidate. Checks run in a fixed
// order so exactly one reason is ever reported:
//   honorific-only -> token cap -> digits/non-letters -> all-caps graphic
//   (unless every token is in the name lexicons) -> single-token stoplist
//   rules -> all-token stoplist -> accept.
ValidationVerdict validate_name(const NameCandidate& candidate, const Lexicons& lex,
                                const EntityConfig& config);

// External NER adapter: reads newline-delimited text on stdin, writes a JSON
// array [{"text": "...", "label": "PERSON"}] to stdout. Non-PERSON labels
// are ignored.
class NerAdapter {
public:
    virtual ~NerAdapter() = default;
    virtual std::vector<std::string> extract_persons(const std::string& line) = 0;
    virtual std::string describe() const = 0;
};
std::unique_ptr<NerAdapter> make_command_ner(const std::vector<std::string>& cmd);

// Stage 4 entry point. The heuristic backend emits maximal runs of
// capitalized tokens (lowercase particles may join a run; all-caps graphic
// tokens never start or extend one), strips leading honorifics, and keeps
// runs of length >= 2, or length 1 when the token is a known given name.
// Adapter results (when an adapter is configured) are merged by union;
// duplicates collapse on the normalized key. Adapter failure degrades to
// heuristic-only output with a warning.
std::vector<NameCandidate> recognize_entities(const TextSpan& span, const Lexicons& lex,
                                              const EntityConfig& config, NerAdapter* adapter,
                                              Diagnostics& diag);

}  // namespace anep
