#include "apdakit/io/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace apdakit::io {

namespace {

// next whitespace-separated token, skipping '#' comments
std::size_t next_header_value(std::istream& in) {
  for (;;) {
    int ch = in.peek();
    if (ch == EOF) throw std::runtime_error("pgm: truncated header");
    if (std::isspace(ch)) {
      in.get();
      continue;
    }
    if (ch == '#') {
      std::string comment;
      std::getline(in, comment);
      continue;
    }
    break;
  }
  std::size_t value = 0;
  if (!(in >> value)) throw std::runtime_error("pgm: malformed header value");
  return value;
}

}  // namespace

Image read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
    throw std::runtime_error("pgm: bad magic (want P2 or P5)");
  const bool binary = magic[1] == '5';

  const std::size_t width = next_header_value(in);
  const std::size_t height = next_header_value(in);
  const std::size_t maxval = next_header_value(in);
  if (width == 0 || height == 0)
    throw std::runtime_error("pgm: zero-sized image");
  if (maxval == 0 || maxval > 65535)
    throw std::runtime_error("pgm: maxval out of range");

  Image image(height, width);
  const double scale = 1.0 / static_cast<double>(maxval);

  if (binary) {
    in.get();  // single whitespace after maxval
    const bool wide = maxval > 255;
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
      int hi = in.get();
      if (hi == EOF) throw std::runtime_error("pgm: truncated payload");
      std::size_t v = static_cast<std::size_t>(hi);
      if (wide) {
        const int lo = in.get();
        if (lo == EOF) throw std::runtime_error("pgm: truncated payload");
        v = (v << 8) | static_cast<std::size_t>(lo);
      }
      if (v > maxval) throw std::runtime_error("pgm: sample exceeds maxval");
      image.pixels[i] = static_cast<double>(v) * scale;
    }
  } else {
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
      long long v = 0;
      if (!(in >> v)) throw std::runtime_error("pgm: truncated payload");
      if (v < 0 || static_cast<std::size_t>(v) > maxval)
        throw std::runtime_error("pgm: sample out of range");
      image.pixels[i] = static_cast<double>(v) * scale;
    }
  }
  return image;
}

Image load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open '" + path + "'");
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const Image& image) {
  image.require_consistent();
  if (image.size() == 0) throw std::invalid_argument("pgm: empty image");
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  for (double p : image.pixels) {
    // clamp, then round half away from zero
    const double scaled = std::round(std::min(std::max(p, 0.0), 1.0) * 255.0);
    out.put(static_cast<char>(static_cast<unsigned char>(scaled)));
  }
}

void save_pgm(const std::string& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pgm: cannot open '" + path + "' for writing");
  write_pgm(out, image);
}

}  // namespace apdakit::io
