#pragma once

#include <map>
#include <string>

namespace anep {

// Single-character OCR repair substitutions ("|" -> "I", "0" -> "O").
// Versioned config data: the audit trail records the digest of the table in
// force, so a changed table is always detectable.
class RepairTable {
public:
    RepairTable() = default;
    // Throws anep::Error if a key/value is not exactly one codepoint or a
    // value is itself a key (which would break normalize_text idempotence).
    static RepairTable from_json(const std::string& json_text);
    static RepairTable load(const std::string& path);
    static RepairTable builtin_default();

    const std::map<char32_t, char32_t>& entries() const { return entries_; }
    std::string digest() const;

private:
    std::map<char32_t, char32_t> entries_;
};

// Normalizes one OCR text line:
//   1. Unicode canonical composition (Latin).
//   2. Split on whitespace; per token, strip leading/trailing codepoints
//      that are not letters, digits, combining marks, or repair keys.
//   3. Tokens made only of letters/marks and repair keys (with at least one
//      letter) get the repair substitutions applied.
//   4. Re-join with single spaces.
// Diacritics are never stripped; the function is idempotent.
std::string normalize_text(const std::string& raw, const RepairTable& repairs);

}  // namespace anep
