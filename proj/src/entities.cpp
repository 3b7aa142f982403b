#include "anep/entities.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anep/subprocess.hpp"
#include "anep/unicode.hpp"

using nlohmann::json;

namespace anep {

std::string fold_key(const std::string& surface) {
    const std::u32string cps = uni::compose_canonical(uni::decode_utf8(surface));
    std::string out;
    bool pending_space = false;
    bool started = false;
    for (char32_t c : cps) {
        if (c == U' ' || c == U'\t' || c == U'\r' || c == U'\n' || c == 0x00A0) {
            pending_space = started;
            continue;
        }
        const std::string folded = uni::fold_to_ascii(c);
        if (folded.empty()) continue;  // combining mark
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out += folded;
        started = true;
    }
    return out;
}

std::vector<std::string> strip_honorifics(std::vector<std::string> tokens, const Lexicons& lex) {
    size_t start = 0;
    while (start < tokens.size() && lex.is_honorific(fold_key(tokens[start]))) ++start;
    tokens.erase(tokens.begin(), tokens.begin() + long(start));
    return tokens;
}

namespace {

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

struct TokenInfo {
    int letters = 0;
    int uppers = 0;
    int lowers = 0;
    int digits = 0;
    bool first_is_upper = false;
};

TokenInfo classify(const std::string& token) {
    TokenInfo info;
    bool first_letter_seen = false;
    for (char32_t c : uni::decode_utf8(token)) {
        if (uni::is_letter(c)) {
            ++info.letters;
            if (uni::is_upper(c)) ++info.uppers;
            if (uni::is_lower(c)) ++info.lowers;
            if (!first_letter_seen) {
                info.first_is_upper = uni::is_upper(c);
                first_letter_seen = true;
            }
        } else if (uni::is_digit(c)) {
            ++info.digits;
        }
    }
    return info;
}

// Title-case-ish: starts with an uppercase letter and is not a block-caps
// graphic word ("McDonald" and single initials qualify, "BREAKING" does not).
bool is_capitalized(const TokenInfo& info) {
    return info.first_is_upper && (info.lowers > 0 || info.letters == 1);
}

bool is_all_caps(const TokenInfo& info) {
    return info.letters >= 2 && info.uppers == info.letters;
}

}  // namespace

NameCandidate NameCandidate::from_surface(const std::string& surface, const Lexicons& lex,
                                          double timestamp_s, double confidence) {
    NameCandidate c;
    c.surface = surface;
    c.tokens = split_tokens(surface);
    c.stripped_tokens = strip_honorifics(c.tokens, lex);
    c.compare_tokens.reserve(c.stripped_tokens.size());
    for (const auto& t : c.stripped_tokens) c.compare_tokens.push_back(fold_key(t));
    c.normalized = join(c.compare_tokens);
    c.timestamp_s = timestamp_s;
    c.source_confidence = confidence;
    return c;
}

const char* to_string(VerdictReason r) {
    switch (r) {
        case VerdictReason::Ok: return "OK";
        case VerdictReason::HonorificOnly: return "Honorific-Only";
        case VerdictReason::AmbiguousSingleSurname: return "Ambiguous-Single-Surname";
        case VerdictReason::Stoplist: return "Stoplist";
        case VerdictReason::AllCapsGraphic: return "All-Caps-Graphic";
        case VerdictReason::TooManyTokens: return "Too-Many-Tokens";
        case VerdictReason::NonLetter: return "Non-Letter";
    }
    return "OK";
}

ValidationVerdict validate_name(const NameCandidate& candidate, const Lexicons& lex,
                                const EntityConfig& config) {
    const auto& tokens = candidate.stripped_tokens;
    if (tokens.empty()) return {false, VerdictReason::HonorificOnly};
    if (int(tokens.size()) > config.max_tokens) return {false, VerdictReason::TooManyTokens};

    std::vector<TokenInfo> infos;
    infos.reserve(tokens.size());
    for (const auto& t : tokens) infos.push_back(classify(t));

    for (const auto& info : infos)
        if (info.digits > 0 || info.letters == 0) return {false, VerdictReason::NonLetter};

    const bool every_token_all_caps =
        std::all_of(infos.begin(), infos.end(), [](const TokenInfo& i) { return is_all_caps(i); });
    if (every_token_all_caps) {
        const bool all_in_lexicon =
            std::all_of(candidate.compare_tokens.begin(), candidate.compare_tokens.end(),
                        [&](const std::string& t) { return lex.in_name_lexicon(t); });
        if (!all_in_lexicon) return {false, VerdictReason::AllCapsGraphic};
    }

    if (tokens.size() == 1) {
        const std::string& key = candidate.compare_tokens[0];
        if (lex.is_stopword(key)) {
            if (lex.is_surname(key)) {
                if (config.allow_single_surname) return {true, VerdictReason::Ok};
                return {false, VerdictReason::AmbiguousSingleSurname};
            }
            return {false, VerdictReason::Stoplist};
        }
        return {true, VerdictReason::Ok};
    }

    const bool all_stopwords =
        std::all_of(candidate.compare_tokens.begin(), candidate.compare_tokens.end(),
                    [&](const std::string& t) { return lex.is_stopword(t); });
    if (all_stopwords) return {false, VerdictReason::Stoplist};

    return {true, VerdictReason::Ok};
}

namespace {

class CommandNer final : public NerAdapter {
public:
    explicit CommandNer(std::vector<std::string> cmd) : cmd_(std::move(cmd)) {}

    std::vector<std::string> extract_persons(const std::string& line) override {
        const CommandResult res = run_command(cmd_, line + "\n");
        if (res.failed())
            throw Error("ner adapter exited with code " + std::to_string(res.exit_code));
        json doc;
        try {
            doc = json::parse(res.output);
        } catch (const json::exception& e) {
            throw Error(std::string("ner adapter produced invalid JSON: ") + e.what());
        }
        if (!doc.is_array()) throw Error("ner adapter output is not a JSON array");
        std::vector<std::string> persons;
        for (const auto& e : doc) {
            if (!e.is_object() || !e.contains("text") || !e.contains("label")) continue;
            if (e["label"].get<std::string>() == "PERSON")
                persons.push_back(e["text"].get<std::string>());
        }
        return persons;
    }

    std::string describe() const override {
        std::string joined;
        for (const auto& a : cmd_) joined += (joined.empty() ? "" : " ") + a;
        return "command:" + joined;
    }

private:
    std::vector<std::string> cmd_;
};

std::vector<NameCandidate> heuristic_candidates(const TextSpan& span, const Lexicons& lex) {
    const std::vector<std::string> tokens = split_tokens(span.text);
    std::vector<TokenInfo> infos;
    infos.reserve(tokens.size());
    for (const auto& t : tokens) infos.push_back(classify(t));

    std::vector<NameCandidate> out;
    size_t i = 0;
    while (i < tokens.size()) {
        if (!is_capitalized(infos[i]) || is_all_caps(infos[i])) {
            ++i;
            continue;
        }
        size_t j = i + 1;
        while (j < tokens.size() &&
               ((is_capitalized(infos[j]) && !is_all_caps(infos[j])) ||
                lex.is_particle(fold_key(tokens[j]))))
            ++j;
        std::vector<std::string> run(tokens.begin() + long(i), tokens.begin() + long(j));
        while (!run.empty() && lex.is_particle(fold_key(run.back())) &&
               !is_capitalized(classify(run.back())))
            run.pop_back();
        i = j;

        run = strip_honorifics(run, lex);
        if (run.empty()) continue;
        if (run.size() == 1 && !lex.is_given_name(fold_key(run[0]))) continue;

        NameCandidate c = NameCandidate::from_surface(join(run), lex, span.frame_timestamp_s,
                                                      span.confidence);
        c.frame_index = span.region.frame_index;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

std::unique_ptr<NerAdapter> make_command_ner(const std::vector<std::string>& cmd) {
    return std::make_unique<CommandNer>(cmd);
}

std::vector<NameCandidate> recognize_entities(const TextSpan& span, const Lexicons& lex,
                                              const EntityConfig& config, NerAdapter* adapter,
                                              Diagnostics& diag) {
    (void)config;
    std::vector<NameCandidate> merged = heuristic_candidates(span, lex);
    std::set<std::string> seen;
    for (const auto& c : merged) seen.insert(c.normalized);

    if (adapter) {
        try {
            for (const std::string& person : adapter->extract_persons(span.text)) {
                NameCandidate c = NameCandidate::from_surface(person, lex, span.frame_timestamp_s,
                                                              span.confidence);
                c.frame_index = span.region.frame_index;
                c.source = "ner-adapter";
                if (c.stripped_tokens.empty()) continue;
                if (seen.count(c.normalized)) {
                    for (auto& existing : merged)
                        if (existing.normalized == c.normalized) existing.source = "both";
                    continue;
                }
                seen.insert(c.normalized);
                merged.push_back(std::move(c));
            }
        } catch (const Error& e) {
            diag.warn("entities",
                      std::string("ner adapter failure, heuristic-only result: ") + e.what(),
                      span.region.frame_index);
        }
    }

    // Unique normalized keys per span, first occurrence wins.
    std::vector<NameCandidate> unique;
    std::set<std::string> emitted;
    for (auto& c : merged) {
        if (emitted.insert(c.normalized).second) unique.push_back(std::move(c));
    }
    return unique;
}

}  // namespace anep
