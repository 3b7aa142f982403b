#pragma once

#include <string>

#include "anep/image.hpp"

namespace anep {

// One sampled video frame. timestamp_s = index / sample_rate; indices are
// strictly increasing within a run, so timestamps are too.
struct Frame {
    long index = 0;
    double timestamp_s = 0.0;
    Rgb8Image image;
    std::string source_path;  // empty for synthetic in-memory frames
};

}  // namespace anep
