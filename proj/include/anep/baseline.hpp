#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anep/audit.hpp"
#include "anep/errors.hpp"
#include "anep/evalharness.hpp"
#include "anep/frame.hpp"

namespace anep {

// Generic client for a multimodal HTTP endpoint. One client covers every
// configured backend; endpoint, model id, and prompt template are data.
struct BaselineConfig {
    std::string endpoint;           // e.g. http://host:port/v1/generate
    std::string model_id;
    std::string prompt_template_path;
    double timeout_s = 60.0;
    int max_frames_per_request = 16;
    int max_attempts = 3;
    double backoff_initial_s = 0.5;   // doubles per retry; tests set 0
    std::string api_key_env = "ANEP_API_KEY";

    static BaselineConfig from_json(const std::string& json_text);
    static BaselineConfig load(const std::string& path);
};

// The JSON schema the prompt instructs the model to emit.
extern const char* const kResponseSchemaBlock;

// Renders the prompt template. Supported placeholders: {{schema}} (the
// response schema block) and {{model_id}}. An unknown placeholder is a
// config error naming the placeholder. Same inputs, same string.
std::string build_prompt(const std::string& template_text, const BaselineConfig& config);
std::string load_prompt_template(const std::string& path);

struct EncodedFrame {
    long index = 0;
    double timestamp_s = 0.0;
    std::string base64_png;
};

// PNG-encode then base64, preserving frame order. Frames are expected to be
// deduplicated already (same perceptual-hash rule as ingest).
std::vector<EncodedFrame> encode_frames(const std::vector<Frame>& frames, Diagnostics& diag);

struct HttpResponse {
    bool timed_out = false;   // timeout or transport-level failure (retryable)
    int status = 0;
    std::string body;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const std::string& url, const std::string& api_key,
                              const std::string& json_body, double timeout_s) = 0;
    virtual std::string describe() const = 0;
};

std::unique_ptr<Transport> make_http_transport();
// Replays scripted responses from a fixtures directory, one file per request
// in sorted filename order: {"status": 200, "body": "..."} or
// {"simulate": "timeout"}. Requests made are recorded for assertions.
class MockTransport : public Transport {
public:
    explicit MockTransport(const std::string& fixtures_dir);
    HttpResponse post(const std::string& url, const std::string& api_key,
                      const std::string& json_body, double timeout_s) override;
    std::string describe() const override { return "mock:" + fixtures_dir_; }
    const std::vector<std::string>& request_bodies() const { return request_bodies_; }

private:
    std::string fixtures_dir_;
    std::vector<std::string> fixture_files_;
    size_t next_ = 0;
    std::vector<std::string> request_bodies_;
};

struct BaselineRequest {
    std::vector<EncodedFrame> frames;
    std::string prompt;
    std::string endpoint;
    std::string model_id;
    double timeout_s = 60.0;
};

struct BaselineResponse {
    bool ok = false;           // a 2xx response was obtained
    int attempts = 0;
    int status = 0;
    std::string raw;           // verbatim body, persisted even when parsing fails
    std::string error;         // set when !ok
};

// Issues the request with up to max_attempts tries on timeout/transport
// failure (exponential backoff). Non-2xx responses are final and recorded
// with their body. The verbatim body is always retained.
BaselineResponse query_endpoint(const BaselineRequest& request, Transport& transport,
                                int max_attempts, double backoff_initial_s,
                                const std::string& api_key, Diagnostics& diag);

struct ParsedName {
    std::string name;
    std::optional<double> first_s;
    std::optional<double> last_s;
};

struct ParseResult {
    std::vector<ParsedName> names;
    bool ok = false;
    std::string error;  // "missing-field", "unparseable", ... empty when ok
};

// Accepts the schema object ({"names": [...]}) with entries as objects or
// strings, or a bare JSON array of strings. Trims names and deduplicates by
// folded key. Never throws; failures downgrade to an empty list with a flag.
ParseResult parse_response(const std::string& raw);

struct BaselineRunResult {
    std::vector<Prediction> predictions;
    std::vector<std::string> raw_response_paths;
    int requests_sent = 0;
};

// The full generative-extraction protocol: dedup (caller supplies frames
// as loaded; dedup applied here) -> batch -> encode -> prompt -> query ->
// parse -> union names. Writes raw responses and predictions under out_dir
// and appends per-request audit records.
BaselineRunResult run_baseline(const std::vector<Frame>& frames, int dedup_threshold,
                               const BaselineConfig& config, Transport& transport,
                               const std::string& out_dir, AuditTrail& audit, Diagnostics& diag);

}  // namespace anep
