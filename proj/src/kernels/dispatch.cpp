// Runtime backend selection and the public kernel entry points.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "apdakit/kernels/kernels.hpp"
#include "kernel_table.hpp"

namespace apdakit::kernels {

namespace {

using detail::KernelTable;

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return &detail::scalar_table();
#if APDAKIT_X86_64
    case Backend::kAvx2:
      return detail::avx2_supported() ? &detail::avx2_table() : nullptr;
#endif
#if APDAKIT_AARCH64
    case Backend::kNeon:
      return &detail::neon_table();
#endif
    default:
      return nullptr;
  }
}

Backend default_backend() {
  if (const char* env = std::getenv("APDA_KIT_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::kScalar;
    if (v == "avx2" && table_for(Backend::kAvx2)) return Backend::kAvx2;
    if (v == "neon" && table_for(Backend::kNeon)) return Backend::kNeon;
    // "auto" or unusable request falls through to detection
  }
#if APDAKIT_X86_64
  if (table_for(Backend::kAvx2)) return Backend::kAvx2;
#endif
#if APDAKIT_AARCH64
  return Backend::kNeon;
#endif
  return Backend::kScalar;
}

struct Dispatch {
  std::atomic<const KernelTable*> table;
  std::atomic<Backend> backend;
  Dispatch() {
    const Backend b = default_backend();
    backend.store(b);
    table.store(table_for(b));
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

inline const KernelTable& active() { return *dispatch().table.load(); }

void check_len(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "?";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::kScalar};
#if APDAKIT_X86_64
  if (table_for(Backend::kAvx2)) out.push_back(Backend::kAvx2);
#endif
#if APDAKIT_AARCH64
  out.push_back(Backend::kNeon);
#endif
  return out;
}

Backend active_backend() { return dispatch().backend.load(); }

void select_backend(Backend b) {
  const KernelTable* t = table_for(b);
  if (!t)
    throw std::invalid_argument(std::string("simd backend not available: ") +
                                backend_name(b));
  dispatch().backend.store(b);
  dispatch().table.store(t);
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_len(x.size(), y.size(), "dot");
  return active().dot(x.data(), y.data(), x.size());
}

double nrm2_sq(std::span<const double> x) {
  return active().nrm2_sq(x.data(), x.size());
}

double diff_nrm2_sq(std::span<const double> x, std::span<const double> y) {
  check_len(x.size(), y.size(), "diff_nrm2_sq");
  return active().diff_nrm2_sq(x.data(), y.data(), x.size());
}

double l1_norm(std::span<const double> x) {
  return active().l1_norm(x.data(), x.size());
}

double linf_norm(std::span<const double> x) {
  return active().linf_norm(x.data(), x.size());
}

double group_l21_norm(std::span<const double> a, std::span<const double> b) {
  check_len(a.size(), b.size(), "group_l21_norm");
  return active().group_l21_norm(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_len(x.size(), y.size(), "axpy");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void add_scaled(std::span<const double> x, double alpha,
                std::span<const double> d, std::span<double> out) {
  check_len(x.size(), d.size(), "add_scaled");
  check_len(x.size(), out.size(), "add_scaled");
  active().add_scaled(x.data(), alpha, d.data(), out.data(), x.size());
}

void extrapolate(std::span<const double> x, double theta,
                 std::span<const double> x_prev, std::span<double> out) {
  check_len(x.size(), x_prev.size(), "extrapolate");
  check_len(x.size(), out.size(), "extrapolate");
  active().extrapolate(x.data(), theta, x_prev.data(), out.data(), x.size());
}

void descent_step(std::span<const double> x, double t,
                  std::span<const double> g, std::span<const double> u,
                  std::span<double> out) {
  check_len(x.size(), g.size(), "descent_step");
  check_len(x.size(), u.size(), "descent_step");
  check_len(x.size(), out.size(), "descent_step");
  active().descent_step(x.data(), t, g.data(), u.data(), out.data(), x.size());
}

void soft_threshold(std::span<const double> z, double t,
                    std::span<double> out) {
  check_len(z.size(), out.size(), "soft_threshold");
  active().soft_threshold(z.data(), t, out.data(), z.size());
}

void clamp_abs(std::span<const double> z, double bound, std::span<double> out) {
  check_len(z.size(), out.size(), "clamp_abs");
  active().clamp_abs(z.data(), bound, out.data(), z.size());
}

void group_shrink_pairs(std::span<const double> a, std::span<const double> b,
                        double t, std::span<double> oa, std::span<double> ob) {
  check_len(a.size(), b.size(), "group_shrink_pairs");
  check_len(a.size(), oa.size(), "group_shrink_pairs");
  check_len(a.size(), ob.size(), "group_shrink_pairs");
  if (t <= 0.0) {
    // threshold 0 is the identity; avoids 0/0 in the factor
    std::copy(a.begin(), a.end(), oa.begin());
    std::copy(b.begin(), b.end(), ob.begin());
    return;
  }
  active().group_shrink_pairs(a.data(), b.data(), t, oa.data(), ob.data(),
                              a.size());
}

void group_project_pairs(std::span<const double> a, std::span<const double> b,
                         double r, std::span<double> oa,
                         std::span<double> ob) {
  check_len(a.size(), b.size(), "group_project_pairs");
  check_len(a.size(), oa.size(), "group_project_pairs");
  check_len(a.size(), ob.size(), "group_project_pairs");
  if (r <= 0.0) {
    // radius-0 ball: projection is identically zero
    std::fill(oa.begin(), oa.end(), 0.0);
    std::fill(ob.begin(), ob.end(), 0.0);
    return;
  }
  active().group_project_pairs(a.data(), b.data(), r, oa.data(), ob.data(),
                               a.size());
}

}  // namespace apdakit::kernels
