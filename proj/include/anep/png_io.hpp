#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anep/image.hpp"

namespace anep {

// Decodes any 8/16-bit PNG to RGB8 (libpng; palette/grey/alpha variants are
// expanded, alpha is dropped). Throws anep::Error on unreadable files.
Rgb8Image read_png(const std::string& path);

// Minimal deterministic PNG encoder: 8-bit RGB (or greyscale), filter byte 0
// on every row, one IDAT chunk, zlib level 6. Byte-identical output for
// identical pixels, which the audit digests and the request-encoding tests
// rely on.
std::vector<uint8_t> encode_png(const Rgb8Image& img);
std::vector<uint8_t> encode_png_grey(const Grey8Image& img);

void write_png(const std::string& path, const Rgb8Image& img);
void write_png_grey(const std::string& path, const Grey8Image& img);

}  // namespace anep
