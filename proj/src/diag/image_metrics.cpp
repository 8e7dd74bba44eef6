#include "apdakit/diag/image_metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace apdakit::diag {

namespace {

constexpr std::size_t kWindow = 8;

void check_shapes(const Image& a, const Image& b, const char* what) {
  a.require_consistent();
  b.require_consistent();
  if (a.height != b.height || a.width != b.width)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.height) + "x" +
                                std::to_string(a.width) + " vs " +
                                std::to_string(b.height) + "x" +
                                std::to_string(b.width) + ")");
}

}  // namespace

double psnr(const Image& reference, const Image& candidate, double peak) {
  check_shapes(reference, candidate, "psnr");
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
  double mse = 0.0;
  for (std::size_t i = 0; i < reference.pixels.size(); ++i) {
    const double d = reference.pixels[i] - candidate.pixels[i];
    mse += d * d;
  }
  mse /= static_cast<double>(reference.pixels.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Image& reference, const Image& candidate, double peak) {
  check_shapes(reference, candidate, "ssim");
  if (!(peak > 0.0)) throw std::invalid_argument("ssim: peak must be positive");
  if (reference.height < kWindow || reference.width < kWindow)
    throw std::invalid_argument("ssim: image smaller than the 8x8 window");

  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  const double n = static_cast<double>(kWindow * kWindow);

  double total = 0.0;
  std::size_t windows = 0;
  for (std::size_t i = 0; i + kWindow <= reference.height; ++i) {
    for (std::size_t j = 0; j + kWindow <= reference.width; ++j) {
      double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (std::size_t di = 0; di < kWindow; ++di) {
        for (std::size_t dj = 0; dj < kWindow; ++dj) {
          const double x = reference.at(i + di, j + dj);
          const double y = candidate.at(i + di, j + dj);
          sx += x;
          sy += y;
          sxx += x * x;
          syy += y * y;
          sxy += x * y;
        }
      }
      const double mx = sx / n;
      const double my = sy / n;
      const double vx = sxx / n - mx * mx;
      const double vy = syy / n - my * my;
      const double cov = sxy / n - mx * my;
      const double value = ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                           ((mx * mx + my * my + c1) * (vx + vy + c2));
      total += value;
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

}  // namespace apdakit::diag
