#pragma once

// Trace-level verification of the stepsize invariants: recomputes every
// bound from the recorded (tau_k, theta_k, L_k) stream, independently of
// the solver's internal checks.

#include <cstdint>
#include <span>
#include <string>

#include "apdakit/diag/record.hpp"
#include "apdakit/solvers/apda.hpp"

namespace apdakit::diag {

struct StepsizeCheckReport {
  std::int64_t records_checked = 0;
  std::int64_t violations = 0;
  std::string first_violation;
  // worst (smallest) slack across the tau_k L_k bound, as a fraction of
  // the bound
  double worst_tl_margin = 1.0;
  // min_k tau_k against the uniform floor 1/(2 sqrt(L_max^2 +
  // (beta/(1-c)) ||A||^2)) with L_max the largest recorded estimate
  double tau_floor = 0.0;
  double tau_min = 0.0;
  bool floor_ok = false;
  bool ok() const { return violations == 0 && floor_ok; }
};

StepsizeCheckReport check_stepsize_invariants(
    std::span<const IterationRecord> trace, solvers::ApdaVariant variant,
    double beta, double c, double norm_A);

}  // namespace apdakit::diag
