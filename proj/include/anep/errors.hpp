#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace anep {

// Fatal error: bad configuration, unreadable input, broken adapter contract
// at a point where the pipeline cannot continue.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class Severity { Warning, Error };

struct Diag {
    Severity severity = Severity::Warning;
    std::string stage;    // module that raised it ("ingest", "detect", ...)
    std::string message;
    long frame_index = -1;  // -1 when not frame-scoped
};

// Collects per-item soft failures (skipped frames, rejected adapter rows).
// The orchestrator drains these into the audit trail; library callers can
// inspect or ignore them.
struct Diagnostics {
    std::vector<Diag> items;

    void warn(std::string stage, std::string message, long frame_index = -1) {
        items.push_back({Severity::Warning, std::move(stage), std::move(message), frame_index});
    }
    void error(std::string stage, std::string message, long frame_index = -1) {
        items.push_back({Severity::Error, std::move(stage), std::move(message), frame_index});
    }
    bool empty() const { return items.empty(); }
};

}  // namespace anep
