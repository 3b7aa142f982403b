#pragma once

#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace anep {

// Append-only JSONL audit trail. One record per stage transition of every
// item; records link inputs to outputs by content digest, so any final name
// can be traced back to the frame and parameters that produced it. Apart
// from wall_time_ms every field is a deterministic function of the inputs
// and the configuration.
struct AuditRecord {
    uint64_t seq = 0;  // assigned on append
    std::string stage;  // ingest | detect | ocr | entities | cluster | eval | baseline | run
    std::optional<long> frame_index;
    std::string input_digest;
    std::string output_digest;
    std::string params_digest;
    std::string message;
    double wall_time_ms = 0.0;

    std::string to_json_line() const;
    static AuditRecord from_json_line(const std::string& line);
};

class AuditTrail {
public:
    // Opens (truncating) path for appends. Empty path = records are kept in
    // memory only, which unit tests use.
    explicit AuditTrail(const std::string& path = "");

    // Assigns the sequence number and appends. Thread-safe; appends are
    // serialized so the line order matches the sequence order.
    void append(AuditRecord record);

    const std::vector<AuditRecord>& records() const { return records_; }
    const std::string& path() const { return path_; }

    static std::vector<AuditRecord> read_file(const std::string& path);

    // Digest over all records with wall_time_ms (the only nondeterministic
    // field) zeroed; equal digests mean equal runs.
    static std::string deterministic_digest(const std::vector<AuditRecord>& records);

private:
    std::string path_;
    std::ofstream out_;
    std::mutex mutex_;
    uint64_t next_seq_ = 0;
    std::vector<AuditRecord> records_;
};

}  // namespace anep
