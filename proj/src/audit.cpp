#include "anep/audit.hpp"

#include <nlohmann/json.hpp>

#include "anep/digest.hpp"
#include "anep/errors.hpp"

using nlohmann::json;

namespace anep {

std::string AuditRecord::to_json_line() const {
    json doc;
    doc["schema_version"] = 1;
    doc["seq"] = seq;
    doc["stage"] = stage;
    if (frame_index) doc["frame_index"] = *frame_index;
    doc["input_digest"] = input_digest;
    doc["output_digest"] = output_digest;
    doc["params_digest"] = params_digest;
    doc["message"] = message;
    doc["wall_time_ms"] = wall_time_ms;
    return doc.dump();
}

AuditRecord AuditRecord::from_json_line(const std::string& line) {
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(std::string("audit: invalid JSONL line: ") + e.what());
    }
    AuditRecord r;
    r.seq = doc.at("seq").get<uint64_t>();
    r.stage = doc.at("stage").get<std::string>();
    if (doc.contains("frame_index")) r.frame_index = doc["frame_index"].get<long>();
    r.input_digest = doc.at("input_digest").get<std::string>();
    r.output_digest = doc.at("output_digest").get<std::string>();
    r.params_digest = doc.at("params_digest").get<std::string>();
    r.message = doc.at("message").get<std::string>();
    r.wall_time_ms = doc.at("wall_time_ms").get<double>();
    return r;
}

AuditTrail::AuditTrail(const std::string& path) : path_(path) {
    if (!path_.empty()) {
        out_.open(path_, std::ios::trunc);
        if (!out_) throw Error("audit: cannot open " + path_);
    }
}

void AuditTrail::append(AuditRecord record) {
    std::lock_guard<std::mutex> lock(mutex_);
    record.seq = next_seq_++;
    if (out_.is_open()) {
        out_ << record.to_json_line() << "\n";
        out_.flush();
    }
    records_.push_back(std::move(record));
}

std::vector<AuditRecord> AuditTrail::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("audit: cannot open " + path);
    std::vector<AuditRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(AuditRecord::from_json_line(line));
    }
    return records;
}

std::string AuditTrail::deterministic_digest(const std::vector<AuditRecord>& records) {
    std::string blob;
    for (AuditRecord r : records) {
        r.wall_time_ms = 0.0;
        blob += r.to_json_line();
        blob.push_back('\n');
    }
    return sha256_hex(blob);
}

}  // namespace anep
