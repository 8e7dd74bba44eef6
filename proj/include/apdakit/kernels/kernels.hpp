#pragma once

// Vector kernels used by the operators, proximal maps and solvers.
// Each kernel has a scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on aarch64) selected at runtime; the variants
// are equivalence-tested against the scalar reference.
//
// Elementwise kernels produce bit-identical results across backends
// (the SIMD variants avoid fused multiply-add). Reductions may differ
// in the last bits because the accumulation order differs.

#include <cstddef>
#include <span>

#include "apdakit/kernels/simd.hpp"

namespace apdakit::kernels {

// ---- reductions -------------------------------------------------------

double dot(std::span<const double> x, std::span<const double> y);
double nrm2_sq(std::span<const double> x);
// ||x - y||^2 without forming the difference
double diff_nrm2_sq(std::span<const double> x, std::span<const double> y);
double l1_norm(std::span<const double> x);
double linf_norm(std::span<const double> x);
// sum_i sqrt(a[i]^2 + b[i]^2) over paired streams of equal length
double group_l21_norm(std::span<const double> a, std::span<const double> b);

// ---- elementwise maps --------------------------------------------------

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// out = x + alpha * d
void add_scaled(std::span<const double> x, double alpha,
                std::span<const double> d, std::span<double> out);
// out = x + theta * (x - x_prev)
void extrapolate(std::span<const double> x, double theta,
                 std::span<const double> x_prev, std::span<double> out);
// out = x - t * (g + u)
void descent_step(std::span<const double> x, double t,
                  std::span<const double> g, std::span<const double> u,
                  std::span<double> out);
// out = sign(z) * max(|z| - t, 0)
void soft_threshold(std::span<const double> z, double t,
                    std::span<double> out);
// out = min(max(z, -bound), bound)
void clamp_abs(std::span<const double> z, double bound,
               std::span<double> out);

// Per-pair shrinkage over paired streams: with n = sqrt(a^2 + b^2),
// scales each pair by max(0, 1 - t/n) (0 when n = 0).
void group_shrink_pairs(std::span<const double> a, std::span<const double> b,
                        double t, std::span<double> oa, std::span<double> ob);
// Per-pair projection onto the l2 ball of radius r: scales by min(1, r/n).
void group_project_pairs(std::span<const double> a, std::span<const double> b,
                         double r, std::span<double> oa, std::span<double> ob);

}  // namespace apdakit::kernels
