// Scalar reference kernels. These are the semantics the SIMD variants
// are tested against.

#include <cmath>
#include <cstddef>

#include "apdakit/kernels/simd.hpp"
#include "kernel_table.hpp"

namespace apdakit::kernels::detail {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2_sq_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double diff_nrm2_sq_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double l1_norm_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double linf_norm_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double group_l21_norm_scalar(const double* a, const double* b,
                             std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::sqrt(a[i] * a[i] + b[i] * b[i]);
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void add_scaled_scalar(const double* x, double alpha, const double* d,
                       double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + alpha * d[i];
}

void extrapolate_scalar(const double* x, double theta, const double* xp,
                        double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + theta * (x[i] - xp[i]);
}

void descent_step_scalar(const double* x, double t, const double* g,
                         const double* u, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - t * (g[i] + u[i]);
}

void soft_threshold_scalar(const double* z, double t, double* out,
                           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::fabs(z[i]) - t;
    out[i] = mag > 0.0 ? std::copysign(mag, z[i]) : 0.0;
  }
}

void clamp_abs_scalar(const double* z, double bound, double* out,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::min(std::max(z[i], -bound), bound);
}

void group_shrink_pairs_scalar(const double* a, const double* b, double t,
                               double* oa, double* ob, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double norm = std::sqrt(a[i] * a[i] + b[i] * b[i]);
    // norm = 0 divides to +inf, max() then yields the correct factor 0
    const double factor = std::max(1.0 - t / norm, 0.0);
    oa[i] = factor * a[i];
    ob[i] = factor * b[i];
  }
}

void group_project_pairs_scalar(const double* a, const double* b, double r,
                                double* oa, double* ob, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double norm = std::sqrt(a[i] * a[i] + b[i] * b[i]);
    const double factor = std::min(r / norm, 1.0);
    oa[i] = factor * a[i];
    ob[i] = factor * b[i];
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      dot_scalar,
      nrm2_sq_scalar,
      diff_nrm2_sq_scalar,
      l1_norm_scalar,
      linf_norm_scalar,
      group_l21_norm_scalar,
      axpy_scalar,
      add_scaled_scalar,
      extrapolate_scalar,
      descent_step_scalar,
      soft_threshold_scalar,
      clamp_abs_scalar,
      group_shrink_pairs_scalar,
      group_project_pairs_scalar,
  };
  return table;
}

}  // namespace apdakit::kernels::detail
