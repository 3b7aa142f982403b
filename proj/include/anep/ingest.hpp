#pragma once

#include <string>
#include <vector>

#include "anep/errors.hpp"
#include "anep/frame.hpp"

namespace anep {

// Loads frames from a directory of PNGs at the given sampling rate.
//
// Files named frame_NNNNNN.png take their index from the filename (a frame
// skipped mid-sequence keeps later timestamps aligned); any other .png set is
// indexed by lexicographic position. timestamp_s = index / sample_rate.
//
// An unreadable directory is fatal; a single undecodable image is skipped
// with a warning.
std::vector<Frame> load_frames(const std::string& frames_dir, double sample_rate,
                               Diagnostics& diag);

// Runs an external decoder to populate a frame directory first, then loads
// it. Contract: `<decoder...> <input> <outdir> <fps>` must write
// frame_%06d.png files and exit 0.
std::vector<Frame> load_frames_via_decoder(const std::vector<std::string>& decoder_cmd,
                                           const std::string& input, const std::string& out_dir,
                                           double sample_rate, Diagnostics& diag);

}  // namespace anep
