// AVX2 kernel variants. This TU is compiled with -mavx2 -mfma and
// -ffp-contract=off: the elementwise kernels keep separate mul/add so
// they round exactly like the scalar reference; only the reductions use
// vfmadd, which changes low-order bits through the accumulation order.

#include "apdakit/kernels/simd.hpp"

#if APDAKIT_X86_64

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kernel_table.hpp"

namespace apdakit::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

const __m256d kSignMask = _mm256_set1_pd(-0.0);

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2_sq_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double diff_nrm2_sq_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double l1_norm_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(kSignMask, _mm256_loadu_pd(x + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double linf_norm_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(kSignMask, _mm256_loadu_pd(x + i)));
  }
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double group_l21_norm_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d sq =
        _mm256_add_pd(_mm256_mul_pd(va, va), _mm256_mul_pd(vb, vb));
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::sqrt(a[i] * a[i] + b[i] * b[i]);
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void add_scaled_avx2(const double* x, double alpha, const double* d,
                     double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(d + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), prod));
  }
  for (; i < n; ++i) out[i] = x[i] + alpha * d[i];
}

void extrapolate_avx2(const double* x, double theta, const double* xp,
                      double* out, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(theta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d diff = _mm256_sub_pd(vx, _mm256_loadu_pd(xp + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(vx, _mm256_mul_pd(vt, diff)));
  }
  for (; i < n; ++i) out[i] = x[i] + theta * (x[i] - xp[i]);
}

void descent_step_avx2(const double* x, double t, const double* g,
                       const double* u, double* out, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d sum =
        _mm256_add_pd(_mm256_loadu_pd(g + i), _mm256_loadu_pd(u + i));
    _mm256_storeu_pd(
        out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(vt, sum)));
  }
  for (; i < n; ++i) out[i] = x[i] - t * (g[i] + u[i]);
}

void soft_threshold_avx2(const double* z, double t, double* out,
                         std::size_t n) {
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vz = _mm256_loadu_pd(z + i);
    const __m256d mag = _mm256_sub_pd(_mm256_andnot_pd(kSignMask, vz), vt);
    const __m256d keep = _mm256_cmp_pd(mag, zero, _CMP_GT_OQ);
    const __m256d signed_mag = _mm256_or_pd(mag, _mm256_and_pd(vz, kSignMask));
    _mm256_storeu_pd(out + i, _mm256_and_pd(keep, signed_mag));
  }
  for (; i < n; ++i) {
    const double mag = std::fabs(z[i]) - t;
    out[i] = mag > 0.0 ? std::copysign(mag, z[i]) : 0.0;
  }
}

void clamp_abs_avx2(const double* z, double bound, double* out,
                    std::size_t n) {
  const __m256d hi = _mm256_set1_pd(bound);
  const __m256d lo = _mm256_set1_pd(-bound);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vz = _mm256_loadu_pd(z + i);
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_max_pd(vz, lo), hi));
  }
  for (; i < n; ++i) out[i] = std::min(std::max(z[i], -bound), bound);
}

void group_shrink_pairs_avx2(const double* a, const double* b, double t,
                             double* oa, double* ob, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d norm = _mm256_sqrt_pd(
        _mm256_add_pd(_mm256_mul_pd(va, va), _mm256_mul_pd(vb, vb)));
    const __m256d factor =
        _mm256_max_pd(_mm256_sub_pd(one, _mm256_div_pd(vt, norm)), zero);
    _mm256_storeu_pd(oa + i, _mm256_mul_pd(factor, va));
    _mm256_storeu_pd(ob + i, _mm256_mul_pd(factor, vb));
  }
  for (; i < n; ++i) {
    const double norm = std::sqrt(a[i] * a[i] + b[i] * b[i]);
    const double factor = std::max(1.0 - t / norm, 0.0);
    oa[i] = factor * a[i];
    ob[i] = factor * b[i];
  }
}

void group_project_pairs_avx2(const double* a, const double* b, double r,
                              double* oa, double* ob, std::size_t n) {
  const __m256d vr = _mm256_set1_pd(r);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d norm = _mm256_sqrt_pd(
        _mm256_add_pd(_mm256_mul_pd(va, va), _mm256_mul_pd(vb, vb)));
    const __m256d factor = _mm256_min_pd(_mm256_div_pd(vr, norm), one);
    _mm256_storeu_pd(oa + i, _mm256_mul_pd(factor, va));
    _mm256_storeu_pd(ob + i, _mm256_mul_pd(factor, vb));
  }
  for (; i < n; ++i) {
    const double norm = std::sqrt(a[i] * a[i] + b[i] * b[i]);
    const double factor = std::min(r / norm, 1.0);
    oa[i] = factor * a[i];
    ob[i] = factor * b[i];
  }
}

}  // namespace

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const KernelTable& avx2_table() {
  static const KernelTable table = {
      dot_avx2,
      nrm2_sq_avx2,
      diff_nrm2_sq_avx2,
      l1_norm_avx2,
      linf_norm_avx2,
      group_l21_norm_avx2,
      axpy_avx2,
      add_scaled_avx2,
      extrapolate_avx2,
      descent_step_avx2,
      soft_threshold_avx2,
      clamp_abs_avx2,
      group_shrink_pairs_avx2,
      group_project_pairs_avx2,
  };
  return table;
}

}  // namespace apdakit::kernels::detail

#endif  // APDAKIT_X86_64
