#pragma once

// Internal: per-backend implementation table. Each backend TU fills one
// of these; dispatch.cpp owns the active pointer.

#include <cstddef>

namespace apdakit::kernels::detail {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*nrm2_sq)(const double*, std::size_t);
  double (*diff_nrm2_sq)(const double*, const double*, std::size_t);
  double (*l1_norm)(const double*, std::size_t);
  double (*linf_norm)(const double*, std::size_t);
  double (*group_l21_norm)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*add_scaled)(const double*, double, const double*, double*,
                     std::size_t);
  void (*extrapolate)(const double*, double, const double*, double*,
                      std::size_t);
  void (*descent_step)(const double*, double, const double*, const double*,
                       double*, std::size_t);
  void (*soft_threshold)(const double*, double, double*, std::size_t);
  void (*clamp_abs)(const double*, double, double*, std::size_t);
  void (*group_shrink_pairs)(const double*, const double*, double, double*,
                             double*, std::size_t);
  void (*group_project_pairs)(const double*, const double*, double, double*,
                              double*, std::size_t);
};

const KernelTable& scalar_table();

#if APDAKIT_X86_64
const KernelTable& avx2_table();
bool avx2_supported();
#endif

#if APDAKIT_AARCH64
const KernelTable& neon_table();
#endif

}  // namespace apdakit::kernels::detail
