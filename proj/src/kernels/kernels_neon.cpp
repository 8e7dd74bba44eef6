// NEON kernel variants (aarch64, 2-wide float64x2_t). Same contract as
// the AVX2 TU: elementwise kernels avoid fused ops so they match the
// scalar reference bit-for-bit; reductions may reassociate.

#include "apdakit/kernels/simd.hpp"

#if APDAKIT_AARCH64

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "kernel_table.hpp"

namespace apdakit::kernels::detail {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2_sq_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double diff_nrm2_sq_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double l1_norm_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double linf_norm_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  }
  double m = vmaxvq_f64(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double group_l21_norm_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va = vld1q_f64(a + i);
    const float64x2_t vb = vld1q_f64(b + i);
    const float64x2_t sq = vaddq_f64(vmulq_f64(va, va), vmulq_f64(vb, vb));
    acc = vaddq_f64(acc, vsqrtq_f64(sq));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += std::sqrt(a[i] * a[i] + b[i] * b[i]);
  return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t prod = vmulq_f64(va, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void add_scaled_neon(const double* x, double alpha, const double* d,
                     double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t prod = vmulq_f64(va, vld1q_f64(d + i));
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(x + i), prod));
  }
  for (; i < n; ++i) out[i] = x[i] + alpha * d[i];
}

void extrapolate_neon(const double* x, double theta, const double* xp,
                      double* out, std::size_t n) {
  const float64x2_t vt = vdupq_n_f64(theta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t diff = vsubq_f64(vx, vld1q_f64(xp + i));
    vst1q_f64(out + i, vaddq_f64(vx, vmulq_f64(vt, diff)));
  }
  for (; i < n; ++i) out[i] = x[i] + theta * (x[i] - xp[i]);
}

void descent_step_neon(const double* x, double t, const double* g,
                       const double* u, double* out, std::size_t n) {
  const float64x2_t vt = vdupq_n_f64(t);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t sum = vaddq_f64(vld1q_f64(g + i), vld1q_f64(u + i));
    vst1q_f64(out + i, vsubq_f64(vld1q_f64(x + i), vmulq_f64(vt, sum)));
  }
  for (; i < n; ++i) out[i] = x[i] - t * (g[i] + u[i]);
}

void soft_threshold_neon(const double* z, double t, double* out,
                         std::size_t n) {
  const float64x2_t vt = vdupq_n_f64(t);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const uint64x2_t sign_mask = vreinterpretq_u64_f64(vdupq_n_f64(-0.0));
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vz = vld1q_f64(z + i);
    const float64x2_t mag = vsubq_f64(vabsq_f64(vz), vt);
    const uint64x2_t keep = vcgtq_f64(mag, zero);
    const uint64x2_t sign = vandq_u64(vreinterpretq_u64_f64(vz), sign_mask);
    const uint64x2_t signed_mag = vorrq_u64(vreinterpretq_u64_f64(mag), sign);
    vst1q_f64(out + i,
              vreinterpretq_f64_u64(vandq_u64(keep, signed_mag)));
  }
  for (; i < n; ++i) {
    const double mag = std::fabs(z[i]) - t;
    out[i] = mag > 0.0 ? std::copysign(mag, z[i]) : 0.0;
  }
}

void clamp_abs_neon(const double* z, double bound, double* out,
                    std::size_t n) {
  const float64x2_t hi = vdupq_n_f64(bound);
  const float64x2_t lo = vdupq_n_f64(-bound);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vminq_f64(vmaxq_f64(vld1q_f64(z + i), lo), hi));
  }
  for (; i < n; ++i) out[i] = std::min(std::max(z[i], -bound), bound);
}

void group_shrink_pairs_neon(const double* a, const double* b, double t,
                             double* oa, double* ob, std::size_t n) {
  const float64x2_t vt = vdupq_n_f64(t);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va = vld1q_f64(a + i);
    const float64x2_t vb = vld1q_f64(b + i);
    const float64x2_t norm =
        vsqrtq_f64(vaddq_f64(vmulq_f64(va, va), vmulq_f64(vb, vb)));
    const float64x2_t factor =
        vmaxq_f64(vsubq_f64(one, vdivq_f64(vt, norm)), zero);
    vst1q_f64(oa + i, vmulq_f64(factor, va));
    vst1q_f64(ob + i, vmulq_f64(factor, vb));
  }
  for (; i < n; ++i) {
    const double norm = std::sqrt(a[i] * a[i] + b[i] * b[i]);
    const double factor = std::max(1.0 - t / norm, 0.0);
    oa[i] = factor * a[i];
    ob[i] = factor * b[i];
  }
}

void group_project_pairs_neon(const double* a, const double* b, double r,
                              double* oa, double* ob, std::size_t n) {
  const float64x2_t vr = vdupq_n_f64(r);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va = vld1q_f64(a + i);
    const float64x2_t vb = vld1q_f64(b + i);
    const float64x2_t norm =
        vsqrtq_f64(vaddq_f64(vmulq_f64(va, va), vmulq_f64(vb, vb)));
    const float64x2_t factor = vminq_f64(vdivq_f64(vr, norm), one);
    vst1q_f64(oa + i, vmulq_f64(factor, va));
    vst1q_f64(ob + i, vmulq_f64(factor, vb));
  }
  for (; i < n; ++i) {
    const double norm = std::sqrt(a[i] * a[i] + b[i] * b[i]);
    const double factor = std::min(r / norm, 1.0);
    oa[i] = factor * a[i];
    ob[i] = factor * b[i];
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table = {
      dot_neon,
      nrm2_sq_neon,
      diff_nrm2_sq_neon,
      l1_norm_neon,
      linf_norm_neon,
      group_l21_norm_neon,
      axpy_neon,
      add_scaled_neon,
      extrapolate_neon,
      descent_step_neon,
      soft_threshold_neon,
      clamp_abs_neon,
      group_shrink_pairs_neon,
      group_project_pairs_neon,
  };
  return table;
}

}  // namespace apdakit::kernels::detail

#endif  // APDAKIT_AARCH64
