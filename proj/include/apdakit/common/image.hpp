#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace apdakit {

// Row-major grayscale image with values nominally in [0, 1].
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(std::size_t h, std::size_t w, double fill = 0.0)
      : height(h), width(w), pixels(h * w, fill) {}

  std::size_t size() const { return height * width; }
  double& at(std::size_t i, std::size_t j) { return pixels[i * width + j]; }
  double at(std::size_t i, std::size_t j) const {
    return pixels[i * width + j];
  }

  void require_consistent() const {
    if (pixels.size() != height * width)
      throw std::invalid_argument("Image: pixel buffer size mismatch");
  }
};

}  // namespace apdakit
