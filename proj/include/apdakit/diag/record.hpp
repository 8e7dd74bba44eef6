#pragma once

// Per-iteration diagnostics row shared by all solvers. Fields a solver
// does not produce stay empty (and serialize as empty CSV cells).

#include <cstdint>
#include <optional>

namespace apdakit::diag {

struct IterationRecord {
  std::int64_t k = 0;
  double tau = 0.0;
  std::optional<double> sigma;
  std::optional<double> theta;
  std::optional<double> lipschitz_estimate;  // L_k
  double f_value = 0.0;
  double full_objective = 0.0;              // F(x_k) = f(x_k) + g(A x_k)
  double primal_residual = 0.0;             // ||grad f(x_k) + A^T y_k||
  std::optional<double> dual_residual;      // ||y_k - prox(y_k + s A x_k)|| / s
  std::optional<double> energy;             // ||x_k - x*||^2 + (1/beta)||y_k - y*||^2
  std::int64_t wall_time_ns = 0;            // cumulative since run start
};

}  // namespace apdakit::diag
