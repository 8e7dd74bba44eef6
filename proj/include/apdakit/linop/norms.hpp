#pragma once

// Operator-norm certificates and the small dense eigenvalue routine
// backing smallest_singular_value.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "apdakit/linop/linop.hpp"

namespace apdakit::linop {

struct PowerIterationResult {
  double estimate = 0.0;  // estimate of ||A||
  int iterations = 0;
  bool converged = false;
};

// Power iteration on A^T A with a seeded random start. Stops when the
// Rayleigh-quotient relative change stays below tol for two consecutive
// iterations, or at max_iters.
PowerIterationResult power_iteration_norm(const LinearOperator& op,
                                          double tol, int max_iters,
                                          std::uint64_t seed);

// Certified upper bound of ||A||. Kinds with an exact known norm return
// their hint directly (identity 1, zero 0, mask 1, discrete gradient
// sqrt(8)); everything else runs power iteration and inflates the
// estimate by the declared safety factor (default 1 + 10*tol).
double operator_norm(const LinearOperator& op, double tol = 1e-10,
                     int max_iters = 20000, std::uint64_t seed = 12345,
                     double inflation = 0.0);

// Eigenvalues of a symmetric n x n matrix (row-major), ascending, via
// cyclic Jacobi rotations. Intended for small matrices.
std::vector<double> jacobi_eigenvalues(std::vector<double> sym,
                                       std::size_t n);

// sigma_min(A) through the eigen-decomposition of A A^T. Only valid for
// operators that can be materialized densely: throws when
// in_dim * out_dim exceeds entry_cap.
double smallest_singular_value(const LinearOperator& op,
                               std::size_t entry_cap = std::size_t{4096} *
                                                       4096);

}  // namespace apdakit::linop
