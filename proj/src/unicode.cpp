#include "anep/unicode.hpp"

#include <algorithm>

namespace anep::uni {

#include "latin_tables.inc"

std::u32string decode_utf8(const std::string& s) {
    std::u32string out;
    out.reserve(s.size());
    size_t i = 0;
    const auto* b = reinterpret_cast<const unsigned char*>(s.data());
    const size_t n = s.size();
    while (i < n) {
        unsigned char c = b[i];
        char32_t cp = 0xFFFD;
        size_t len = 1;
        if (c < 0x80) {
            cp = c;
        } else if ((c & 0xE0) == 0xC0 && i + 1 < n && (b[i + 1] & 0xC0) == 0x80) {
            cp = (char32_t(c & 0x1F) << 6) | (b[i + 1] & 0x3F);
            len = 2;
            if (cp < 0x80) cp = 0xFFFD;  // overlong
        } else if ((c & 0xF0) == 0xE0 && i + 2 < n && (b[i + 1] & 0xC0) == 0x80 &&
                   (b[i + 2] & 0xC0) == 0x80) {
            cp = (char32_t(c & 0x0F) << 12) | (char32_t(b[i + 1] & 0x3F) << 6) | (b[i + 2] & 0x3F);
            len = 3;
            if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
        } else if ((c & 0xF8) == 0xF0 && i + 3 < n && (b[i + 1] & 0xC0) == 0x80 &&
                   (b[i + 2] & 0xC0) == 0x80 && (b[i + 3] & 0xC0) == 0x80) {
            cp = (char32_t(c & 0x07) << 18) | (char32_t(b[i + 1] & 0x3F) << 12) |
                 (char32_t(b[i + 2] & 0x3F) << 6) | (b[i + 3] & 0x3F);
            len = 4;
            if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(const std::u32string& s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s) {
        if (cp < 0x80) {
            out.push_back(char(cp));
        } else if (cp < 0x800) {
            out.push_back(char(0xC0 | (cp >> 6)));
            out.push_back(char(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(char(0xE0 | (cp >> 12)));
            out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(char(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(char(0xF0 | (cp >> 18)));
            out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(char(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

namespace {

const CasePair* find_case_by_upper(char32_t c) {
    auto it = std::lower_bound(std::begin(kCasePairs), std::end(kCasePairs), c,
                               [](const CasePair& p, char32_t v) { return p.upper < v; });
    return (it != std::end(kCasePairs) && it->upper == c) ? &*it : nullptr;
}

bool is_case_lower(char32_t c) {
    for (const auto& p : kCasePairs)
        if (p.lower == c) return true;
    return false;
}

const FoldEntry* find_fold(char32_t c) {
    auto it = std::lower_bound(std::begin(kFoldEntries), std::end(kFoldEntries), c,
                               [](const FoldEntry& e, char32_t v) { return e.cp < v; });
    return (it != std::end(kFoldEntries) && it->cp == c) ? &*it : nullptr;
}

}  // namespace

bool is_combining_mark(char32_t c) { return c >= 0x0300 && c <= 0x036F; }

bool is_upper(char32_t c) {
    if (c < 0x80) return c >= U'A' && c <= U'Z';
    return find_case_by_upper(c) != nullptr;
}

bool is_lower(char32_t c) {
    if (c < 0x80) return c >= U'a' && c <= U'z';
    if (c == 0x00DF) return true;  // ß has no single-codepoint upper in the table ranges
    return is_case_lower(c);
}

bool is_letter(char32_t c) {
    if (c < 0x80) return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z');
    return is_upper(c) || is_lower(c) || find_fold(c) != nullptr;
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

char32_t to_lower(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 32;
    if (const CasePair* p = find_case_by_upper(c)) return p->lower;
    return c;
}

std::u32string compose_canonical(const std::u32string& s) {
    std::u32string out;
    out.reserve(s.size());
    for (char32_t c : s) {
        if (!out.empty() && is_combining_mark(c)) {
            const char32_t base = out.back();
            // kComposePairs is sorted by (base, mark).
            auto it = std::lower_bound(std::begin(kComposePairs), std::end(kComposePairs),
                                       std::pair<char32_t, char32_t>{base, c},
                                       [](const ComposePair& p, const std::pair<char32_t, char32_t>& k) {
                                           return p.base != k.first ? p.base < k.first : p.mark < k.second;
                                       });
            if (it != std::end(kComposePairs) && it->base == base && it->mark == c) {
                out.back() = it->composed;
                continue;
            }
        }
        out.push_back(c);
    }
    return out;
}

std::string fold_to_ascii(char32_t c) {
    if (c < 0x80) {
        char lc = char(c >= U'A' && c <= U'Z' ? c + 32 : c);
        return std::string(1, lc);
    }
    if (is_combining_mark(c)) return {};
    if (const FoldEntry* e = find_fold(c)) {
        std::string out;
        for (const char* p = e->ascii; *p; ++p)
            out.push_back(char(*p >= 'A' && *p <= 'Z' ? *p + 32 : *p));
        return out;
    }
    return encode_utf8(std::u32string(1, to_lower(c)));
}

}  // namespace anep::uni
