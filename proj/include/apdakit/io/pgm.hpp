#pragma once

// PGM images: reads P2 (ASCII) and P5 (binary) with maxval up to 65535,
// scaled to [0, 1]; writes P5 with maxval 255, rounding half away from
// zero.

#include <iosfwd>
#include <string>

#include "apdakit/common/image.hpp"

namespace apdakit::io {

Image read_pgm(std::istream& in);
Image load_pgm(const std::string& path);

void write_pgm(std::ostream& out, const Image& image);
void save_pgm(const std::string& path, const Image& image);

}  // namespace apdakit::io
