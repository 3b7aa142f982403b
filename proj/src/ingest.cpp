#include "anep/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <optional>

#include "anep/png_io.hpp"
#include "anep/subprocess.hpp"

namespace fs = std::filesystem;

namespace anep {

namespace {

std::optional<long> parse_frame_number(const std::string& stem) {
    // frame_NNNNNN
    constexpr std::string_view prefix = "frame_";
    if (stem.size() <= prefix.size() || stem.compare(0, prefix.size(), prefix) != 0)
        return std::nullopt;
    long value = 0;
    const char* first = stem.data() + prefix.size();
    const char* last = stem.data() + stem.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || value < 0) return std::nullopt;
    return value;
}

}  // namespace

std::vector<Frame> load_frames(const std::string& frames_dir, double sample_rate,
                               Diagnostics& diag) {
    if (sample_rate <= 0) throw Error("ingest: sample_rate must be > 0");
    std::error_code ec;
    if (!fs::is_directory(frames_dir, ec))
        throw Error("ingest: not a readable directory: " + frames_dir);

    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(frames_dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            paths.push_back(entry.path().string());
    }
    if (ec) throw Error("ingest: cannot list directory: " + frames_dir);
    std::sort(paths.begin(), paths.end());

    if (paths.empty()) {
        diag.warn("ingest", "no .png frames found in " + frames_dir);
        return {};
    }

    // Use filename-carried indices only when every file follows the
    // frame_%06d.png convention; otherwise fall back to ordinal positions.
    std::vector<long> indices(paths.size());
    bool all_numbered = true;
    for (size_t i = 0; i < paths.size(); ++i) {
        auto n = parse_frame_number(fs::path(paths[i]).stem().string());
        if (!n) {
            all_numbered = false;
            break;
        }
        indices[i] = *n;
    }
    if (!all_numbered)
        for (size_t i = 0; i < paths.size(); ++i) indices[i] = long(i);

    std::vector<Frame> frames;
    frames.reserve(paths.size());
    for (size_t i = 0; i < paths.size(); ++i) {
        Frame f;
        f.index = indices[i];
        f.timestamp_s = double(f.index) / sample_rate;
        f.source_path = paths[i];
        try {
            f.image = read_png(paths[i]);
        } catch (const Error& e) {
            diag.warn("ingest", std::string("skipping undecodable frame: ") + e.what(), f.index);
            continue;
        }
        if (!f.image.valid()) {
            diag.warn("ingest", "skipping frame with invalid buffer: " + paths[i], f.index);
            continue;
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

std::vector<Frame> load_frames_via_decoder(const std::vector<std::string>& decoder_cmd,
                                           const std::string& input, const std::string& out_dir,
                                           double sample_rate, Diagnostics& diag) {
    if (decoder_cmd.empty()) throw Error("ingest: empty decoder command");
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    std::vector<std::string> argv = decoder_cmd;
    argv.push_back(input);
    argv.push_back(out_dir);
    argv.push_back(std::to_string(sample_rate));
    const CommandResult res = run_command(argv);
    if (res.failed())
        throw Error("ingest: decoder exited with code " + std::to_string(res.exit_code));
    return load_frames(out_dir, sample_rate, diag);
}

}  // namespace anep
