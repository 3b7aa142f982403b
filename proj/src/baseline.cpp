#include "anep/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "anep/base64.hpp"
#include "anep/dhash.hpp"
#include "anep/digest.hpp"
#include "anep/entities.hpp"
#include "anep/png_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace anep {

const char* const kResponseSchemaBlock =
    R"({"names": [{"name": "<string>", "first_s": <number or null>, "last_s": <number or null>}]})";

BaselineConfig BaselineConfig::from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("baseline config: invalid JSON: ") + e.what());
    }
    BaselineConfig cfg;
    cfg.endpoint = doc.value("endpoint", "");
    cfg.model_id = doc.value("model_id", "");
    cfg.prompt_template_path = doc.value("prompt_template_path", "");
    cfg.timeout_s = doc.value("timeout_s", cfg.timeout_s);
    cfg.max_frames_per_request = doc.value("max_frames_per_request", cfg.max_frames_per_request);
    cfg.max_attempts = doc.value("max_attempts", cfg.max_attempts);
    cfg.backoff_initial_s = doc.value("backoff_initial_s", cfg.backoff_initial_s);
    cfg.api_key_env = doc.value("api_key_env", cfg.api_key_env);
    if (cfg.max_frames_per_request < 1) throw Error("baseline config: max_frames_per_request >= 1");
    if (cfg.max_attempts < 1) throw Error("baseline config: max_attempts >= 1");
    return cfg;
}

BaselineConfig BaselineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("baseline config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::string load_prompt_template(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("baseline: missing prompt template: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string build_prompt(const std::string& template_text, const BaselineConfig& config) {
    const std::map<std::string, std::string> subs = {
        {"schema", kResponseSchemaBlock},
        {"model_id", config.model_id},
    };
    std::string out;
    out.reserve(template_text.size());
    size_t pos = 0;
    while (pos < template_text.size()) {
        const size_t open = template_text.find("{{", pos);
        if (open == std::string::npos) {
            out.append(template_text, pos, std::string::npos);
            break;
        }
        out.append(template_text, pos, open - pos);
        const size_t close = template_text.find("}}", open + 2);
        if (close == std::string::npos)
            throw Error("baseline: unterminated placeholder in prompt template");
        const std::string name = template_text.substr(open + 2, close - open - 2);
        auto it = subs.find(name);
        if (it == subs.end())
            throw Error("baseline: unknown placeholder \"{{" + name + "}}\" in prompt template");
        out += it->second;
        pos = close + 2;
    }
    return out;
}

std::vector<EncodedFrame> encode_frames(const std::vector<Frame>& frames, Diagnostics& diag) {
    std::vector<EncodedFrame> out;
    out.reserve(frames.size());
    for (const Frame& f : frames) {
        EncodedFrame e;
        e.index = f.index;
        e.timestamp_s = f.timestamp_s;
        try {
            const std::vector<uint8_t> png = encode_png(f.image);
            e.base64_png = base64_encode(png);
        } catch (const Error& err) {
            diag.warn("baseline", std::string("frame encode failed, skipped: ") + err.what(),
                      f.index);
            continue;
        }
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

class HttpTransport final : public Transport {
public:
    HttpResponse post(const std::string& url, const std::string& api_key,
                      const std::string& json_body, double timeout_s) override {
        const size_t scheme_end = url.find("://");
        if (scheme_end == std::string::npos) return {true, 0, "invalid endpoint URL"};
        const size_t path_start = url.find('/', scheme_end + 3);
        const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
        const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

        httplib::Client client(origin);
        client.set_connection_timeout(std::chrono::milliseconds(int64_t(timeout_s * 1000)));
        client.set_read_timeout(std::chrono::milliseconds(int64_t(timeout_s * 1000)));
        httplib::Headers headers;
        if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
        auto res = client.Post(path, headers, json_body, "application/json");
        if (!res) return {true, 0, httplib::to_string(res.error())};
        return {false, res->status, res->body};
    }

    std::string describe() const override { return "http"; }
};

}  // namespace

std::unique_ptr<Transport> make_http_transport() { return std::make_unique<HttpTransport>(); }

MockTransport::MockTransport(const std::string& fixtures_dir) : fixtures_dir_(fixtures_dir) {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(fixtures_dir, ec))
        if (entry.is_regular_file()) fixture_files_.push_back(entry.path().string());
    if (ec) throw Error("mock transport: cannot list " + fixtures_dir);
    std::sort(fixture_files_.begin(), fixture_files_.end());
}

HttpResponse MockTransport::post(const std::string&, const std::string&,
                                 const std::string& json_body, double) {
    request_bodies_.push_back(json_body);
    if (next_ >= fixture_files_.size())
        throw Error("mock transport: no fixture left for request #" +
                    std::to_string(request_bodies_.size()));
    std::ifstream in(fixture_files_[next_++]);
    json doc = json::parse(in);
    if (doc.contains("simulate") && doc["simulate"] == "timeout")
        return {true, 0, "simulated timeout"};
    HttpResponse res;
    res.status = doc.value("status", 200);
    if (doc.contains("body") && doc["body"].is_string())
        res.body = doc["body"].get<std::string>();
    else if (doc.contains("body"))
        res.body = doc["body"].dump();
    return res;
}

namespace {

std::string request_body_json(const BaselineRequest& request) {
    json body;
    body["model"] = request.model_id;
    body["prompt"] = request.prompt;
    json images = json::array();
    for (const auto& f : request.frames) images.push_back(f.base64_png);
    body["images"] = images;
    return body.dump();
}

}  // namespace

BaselineResponse query_endpoint(const BaselineRequest& request, Transport& transport,
                                int max_attempts, double backoff_initial_s,
                                const std::string& api_key, Diagnostics& diag) {
    const std::string body_text = request_body_json(request);

    BaselineResponse out;
    double backoff = backoff_initial_s;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        out.attempts = attempt;
        HttpResponse res = transport.post(request.endpoint, api_key, body_text, request.timeout_s);
        if (res.timed_out) {
            diag.warn("baseline", "attempt " + std::to_string(attempt) + " timed out: " + res.body);
            if (attempt < max_attempts && backoff > 0.0) {
                std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
                backoff *= 2.0;
            }
            continue;
        }
        out.status = res.status;
        out.raw = res.body;  // verbatim, success or not
        if (res.status >= 200 && res.status < 300) {
            out.ok = true;
        } else {
            out.error = "http status " + std::to_string(res.status);
            diag.warn("baseline", out.error + ", body recorded");
        }
        return out;
    }
    out.error = "Baseline-Unavailable: all " + std::to_string(max_attempts) + " attempts timed out";
    diag.error("baseline", out.error);
    return out;
}

ParseResult parse_response(const std::string& raw) {
    ParseResult result;
    json doc = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        result.error = "unparseable";
        return result;
    }

    auto trim = [](const std::string& s) {
        const size_t a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return std::string();
        const size_t b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    };

    std::vector<ParsedName> names;
    auto push_entry = [&](const json& e) {
        ParsedName p;
        if (e.is_string()) {
            p.name = trim(e.get<std::string>());
        } else if (e.is_object() && e.contains("name") && e["name"].is_string()) {
            p.name = trim(e["name"].get<std::string>());
            if (e.contains("first_s") && e["first_s"].is_number())
                p.first_s = e["first_s"].get<double>();
            if (e.contains("last_s") && e["last_s"].is_number())
                p.last_s = e["last_s"].get<double>();
        }
        if (!p.name.empty()) names.push_back(std::move(p));
    };

    if (doc.is_array()) {
        for (const auto& e : doc) push_entry(e);
        result.ok = true;
    } else if (doc.is_object()) {
        if (!doc.contains("names") || !doc["names"].is_array()) {
            result.error = "missing-field";
            return result;
        }
        for (const auto& e : doc["names"]) push_entry(e);
        result.ok = true;
    } else {
        result.error = "unexpected-json-shape";
        return result;
    }

    // Deduplicate by folded key, first occurrence wins.
    std::vector<ParsedName> unique;
    std::set<std::string> seen;
    for (auto& p : names)
        if (seen.insert(fold_key(p.name)).second) unique.push_back(std::move(p));
    result.names = std::move(unique);
    return result;
}

BaselineRunResult run_baseline(const std::vector<Frame>& frames, int dedup_threshold,
                               const BaselineConfig& config, Transport& transport,
                               const std::string& out_dir, AuditTrail& audit, Diagnostics& diag) {
    fs::create_directories(fs::path(out_dir) / "raw_responses");

    std::vector<Frame> deduped = deduplicate(frames, dedup_threshold);
    const std::string prompt =
        build_prompt(load_prompt_template(config.prompt_template_path), config);
    const std::string prompt_digest = sha256_hex(prompt);
    const char* key_env = std::getenv(config.api_key_env.c_str());
    const std::string api_key = key_env ? key_env : "";

    audit.append({0,
                  "baseline",
                  std::nullopt,
                  sha256_hex(std::to_string(frames.size()) + " frames"),
                  prompt_digest,
                  prompt_digest,
                  "prompt template rendered, digest recorded; " +
                      std::to_string(deduped.size()) + " frames after dedup",
                  0.0});

    std::vector<EncodedFrame> encoded = encode_frames(deduped, diag);

    // Batch, query, union names across batches keyed by folded name.
    BaselineRunResult run;
    std::map<std::string, ParsedName> merged;  // fold_key -> entry
    std::vector<std::string> order;            // first-seen order of folded keys
    for (size_t start = 0; start < encoded.size();
         start += size_t(config.max_frames_per_request)) {
        BaselineRequest request;
        const size_t end =
            std::min(encoded.size(), start + size_t(config.max_frames_per_request));
        request.frames.assign(encoded.begin() + long(start), encoded.begin() + long(end));
        request.prompt = prompt;
        request.endpoint = config.endpoint;
        request.model_id = config.model_id;
        request.timeout_s = config.timeout_s;

        const auto t0 = std::chrono::steady_clock::now();
        BaselineResponse response = query_endpoint(request, transport, config.max_attempts,
                                                   config.backoff_initial_s, api_key, diag);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        ++run.requests_sent;

        char name[32];
        std::snprintf(name, sizeof(name), "response_%03d.json", run.requests_sent - 1);
        const std::string raw_path = (fs::path(out_dir) / "raw_responses" / name).string();
        {
            std::ofstream rawf(raw_path, std::ios::binary | std::ios::trunc);
            rawf << response.raw;
        }
        run.raw_response_paths.push_back(raw_path);

        ParseResult parsed = parse_response(response.raw);
        if (response.ok && !parsed.ok)
            diag.warn("baseline", "response parse failed (" + parsed.error + "), raw retained");
        if (response.ok && parsed.ok) {
            for (auto& p : parsed.names) {
                const std::string key = fold_key(p.name);
                auto [it, inserted] = merged.emplace(key, p);
                if (inserted) {
                    order.push_back(key);
                } else {
                    // Union across batches: widen timestamps when both sides have them.
                    if (p.first_s && (!it->second.first_s || *p.first_s < *it->second.first_s))
                        it->second.first_s = p.first_s;
                    if (p.last_s && (!it->second.last_s || *p.last_s > *it->second.last_s))
                        it->second.last_s = p.last_s;
                }
            }
        }

        audit.append({0,
                      "baseline",
                      std::nullopt,
                      sha256_hex(request_body_json(request)),
                      sha256_hex(response.raw),
                      prompt_digest,
                      "request " + std::to_string(run.requests_sent) + ": attempts=" +
                          std::to_string(response.attempts) + " status=" +
                          std::to_string(response.status) + (response.ok ? " ok" : " failed") +
                          (parsed.ok ? "" : " parse=" + parsed.error),
                      ms});
    }

    for (const std::string& key : order) {
        const ParsedName& p = merged.at(key);
        Prediction pred;
        pred.canonical = p.name;
        if (p.first_s && p.last_s) {
            Timeline tl;
            tl.first_s = *p.first_s;
            tl.last_s = *p.last_s;
            tl.intervals.emplace_back(tl.first_s, tl.last_s);
            pred.timeline = std::move(tl);
        }
        run.predictions.push_back(std::move(pred));
    }

    json preds = json::array();
    for (const auto& p : run.predictions) {
        json e;
        e["canonical"] = p.canonical;
        if (p.timeline) {
            e["first_s"] = p.timeline->first_s;
            e["last_s"] = p.timeline->last_s;
            json ivs = json::array();
            for (const auto& [s, t] : p.timeline->intervals) ivs.push_back({s, t});
            e["intervals"] = ivs;
        }
        preds.push_back(e);
    }
    json doc;
    doc["schema_version"] = 1;
    doc["predictions"] = preds;
    std::ofstream out(fs::path(out_dir) / "predictions.json", std::ios::trunc);
    out << doc.dump(2) << "\n";

    return run;
}

}  // namespace anep
