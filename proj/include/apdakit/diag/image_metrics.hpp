#pragma once

// Reconstruction quality metrics.

#include "apdakit/common/image.hpp"

namespace apdakit::diag {

// 10 log10(peak^2 / MSE) in dB; +infinity when the images are identical.
double psnr(const Image& reference, const Image& candidate, double peak);

// Mean local SSIM over all 8x8 sliding windows (uniform weights,
// stabilizers k1 = 0.01, k2 = 0.03 scaled by peak). Result in [-1, 1].
double ssim(const Image& reference, const Image& candidate, double peak);

}  // namespace apdakit::diag
