#pragma once

// UTF-8 and Latin-script text helpers.
//
// The pipeline needs exactly four text capabilities beyond ASCII: canonical
// composition (so OCR output compares equal regardless of how an accent was
// encoded), diacritic folding to base letters, case classification, and
// lowercasing. All four are implemented over the Latin blocks (Latin-1
// Supplement, Latin Extended-A/B, Latin Extended Additional); codepoints
// outside those blocks pass through unchanged, which keeps the folding
// functions total. Non-Latin scripts are out of scope.

#include <cstdint>
#include <string>
#include <vector>

namespace anep::uni {

// Decodes UTF-8; invalid bytes become U+FFFD so decoding is total.
std::u32string decode_utf8(const std::string& s);
std::string encode_utf8(const std::u32string& s);

bool is_letter(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);
bool is_digit(char32_t c);
bool is_combining_mark(char32_t c);
char32_t to_lower(char32_t c);

// Canonical composition for Latin letters: a base letter followed by a
// combining mark becomes the precomposed codepoint when one exists. Pairs
// without a precomposed form are left as-is; marks are never dropped.
std::u32string compose_canonical(const std::u32string& s);

// Folds one codepoint to its lowercase ASCII base form ("Ż" -> "z",
// "Æ" -> "ae"). Combining marks fold to the empty string. Codepoints with
// no Latin base are lowercased and passed through.
std::string fold_to_ascii(char32_t c);

}  // namespace anep::uni
