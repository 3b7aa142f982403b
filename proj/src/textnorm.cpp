#include "anep/textnorm.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anep/digest.hpp"
#include "anep/errors.hpp"
#include "anep/unicode.hpp"

using nlohmann::json;

namespace anep {

RepairTable RepairTable::from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("repair table: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error("repair table: expected a JSON object");
    RepairTable table;
    for (const auto& [key, value] : doc.items()) {
        const std::u32string k = uni::decode_utf8(key);
        const std::u32string v = uni::decode_utf8(value.get<std::string>());
        if (k.size() != 1 || v.size() != 1)
            throw Error("repair table: entries must map one character to one character: \"" +
                        key + "\"");
        table.entries_[k[0]] = v[0];
    }
    for (const auto& [k, v] : table.entries_)
        if (table.entries_.count(v))
            throw Error("repair table: value is itself a key, table would not be idempotent");
    return table;
}

RepairTable RepairTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("repair table: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

RepairTable RepairTable::builtin_default() {
    return from_json(R"({"0": "O", "1": "I", "|": "I", "5": "S", "8": "B"})");
}

std::string RepairTable::digest() const {
    json doc = json::object();
    for (const auto& [k, v] : entries_)
        doc[uni::encode_utf8(std::u32string(1, k))] = uni::encode_utf8(std::u32string(1, v));
    return sha256_hex(doc.dump());
}

namespace {

bool is_space(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\r' || c == U'\n' || c == 0x00A0;
}

bool keeps_token_edge(char32_t c, const std::map<char32_t, char32_t>& repairs) {
    return uni::is_letter(c) || uni::is_digit(c) || uni::is_combining_mark(c) ||
           repairs.count(c) > 0;
}

}  // namespace

std::string normalize_text(const std::string& raw, const RepairTable& repairs) {
    const std::u32string composed = uni::compose_canonical(uni::decode_utf8(raw));
    const auto& table = repairs.entries();

    std::vector<std::u32string> tokens;
    std::u32string current;
    auto flush = [&] {
        if (current.empty()) return;
        // Strip punctuation from both ends; repair keys survive so "|ohn"
        // can still be repaired.
        size_t a = 0, b = current.size();
        while (a < b && !keeps_token_edge(current[a], table)) ++a;
        while (b > a && !keeps_token_edge(current[b - 1], table)) --b;
        std::u32string tok = current.substr(a, b - a);
        current.clear();
        if (tok.empty()) return;

        bool has_letter = false;
        bool all_repairable = true;
        for (char32_t c : tok) {
            if (uni::is_letter(c) || uni::is_combining_mark(c))
                has_letter = has_letter || uni::is_letter(c);
            else if (!table.count(c))
                all_repairable = false;
        }
        if (has_letter && all_repairable) {
            for (char32_t& c : tok) {
                auto it = table.find(c);
                if (it != table.end()) c = it->second;
            }
        }
        tokens.push_back(std::move(tok));
    };

    for (char32_t c : composed) {
        if (is_space(c))
            flush();
        else
            current.push_back(c);
    }
    flush();

    std::u32string joined;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) joined.push_back(U' ');
        joined += tokens[i];
    }
    return uni::encode_utf8(joined);
}

}  // namespace anep
