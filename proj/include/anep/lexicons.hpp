#pragma once

#include <set>
#include <string>

namespace anep {

// Token lexicons backing the linguistic pipeline: honorific prefixes,
// surname particles, a common-English-word stoplist, and seed given-name /
// surname lists. All lookups are by folded key. The seed lists are small
// and deliberately non-exhaustive; the digest of the table in force is
// recorded in the audit trail.
class Lexicons {
public:
    static Lexicons from_json(const std::string& json_text);
    static Lexicons load(const std::string& path);
    static Lexicons builtin_default();

    bool is_honorific(const std::string& folded) const { return honorifics_.count(folded) > 0; }
    bool is_particle(const std::string& folded) const { return particles_.count(folded) > 0; }
    bool is_stopword(const std::string& folded) const { return stopwords_.count(folded) > 0; }
    bool is_given_name(const std::string& folded) const { return given_names_.count(folded) > 0; }
    bool is_surname(const std::string& folded) const { return surnames_.count(folded) > 0; }
    bool in_name_lexicon(const std::string& folded) const {
        return is_given_name(folded) || is_surname(folded);
    }

    std::string digest() const { return digest_; }

private:
    std::set<std::string> honorifics_;
    std::set<std::string> particles_;
    std::set<std::string> stopwords_;
    std::set<std::string> given_names_;
    std::set<std::string> surnames_;
    std::string digest_;
};

}  // namespace anep
