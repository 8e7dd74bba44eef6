#pragma once

// Adaptive primal-dual solver with linesearch-free stepsizes, plus the
// pieces it is built from (local Lipschitz estimate, stepsize rule).
//
// Per loop iteration the solver performs exactly one gradient evaluation
// and two operator applications (one A, one A^T); the diagnostics reuse
// cached products.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apdakit/diag/record.hpp"
#include "apdakit/problems/saddle_problem.hpp"

namespace apdakit::solvers {

enum class ApdaVariant { kBase, kStronglyConvex };

// How the solver treats a violated runtime invariant (stepsize caps,
// theta bound). The default resolves to kThrow on convex problems and
// kWarn on nonconvex ones.
enum class InvariantMode { kFromProblem, kThrow, kWarn, kOff };

struct ApdaConfig {
  double beta = 1.0;        // dual/primal stepsize ratio
  double c = 1e-15;         // the (0,1) constant of the base stepsize rule
  double tau_init = 1e-9;   // warm-step length used to estimate L_1
  ApdaVariant variant = ApdaVariant::kBase;
  std::int64_t max_iters = 1000;
  double residual_tol = 0.0;
  // Certified ||A||. Negative means: resolve from the operator (hint or
  // power iteration).
  double norm_A = -1.0;
  InvariantMode invariants = InvariantMode::kFromProblem;
  // Fault-injection hook for the self-check command: replaces the
  // sqrt(1+theta) growth cap with a deliberately invalid one.
  bool fault_growth_cap = false;
};

struct StepSizes {
  double tau = 0.0;
  double sigma = 0.0;
  double theta = 0.0;
};

enum class StopReason { kConverged, kMaxIters, kNonFinite };

struct TraceSummary {
  std::int64_t iterations = 0;
  double final_objective = 0.0;
  double final_primal_residual = 0.0;
  double final_dual_residual = 0.0;
  double tau_min = 0.0;
  double tau_max = 0.0;
  std::int64_t wall_time_ns = 0;
};

struct RunResult {
  std::vector<double> x;
  std::vector<double> y;
  StopReason stop = StopReason::kMaxIters;
  TraceSummary summary;
};

// Read-only window into the solver state, valid only during the
// callback. At iteration k: x_prev = x_{k-1}, x = x_k, x_next = x_{k+1},
// y = y_k, y_next = y_{k+1}.
struct SolverView {
  std::span<const double> x_prev;
  std::span<const double> x;
  std::span<const double> x_next;
  std::span<const double> y;
  std::span<const double> y_next;
};

// Called once per iteration, in iteration order, after the iteration's
// updates. Must not mutate solver state.
using IterationCallback =
    std::function<void(const diag::IterationRecord&, const SolverView&)>;

// L_k = ||grad_cur - grad_prev|| / ||x_cur - x_prev||; 0 when the
// iterates coincide. Throws when a gradient is non-finite.
double local_lipschitz(std::span<const double> x_cur,
                       std::span<const double> x_prev,
                       std::span<const double> grad_cur,
                       std::span<const double> grad_prev);

// One application of the stepsize rule. tau_prev empty encodes the
// tau_0 = infinity initialization; theta is then defined as 0.
StepSizes apda_stepsize(double lipschitz_estimate,
                        std::optional<double> tau_prev, double theta_prev,
                        const ApdaConfig& config);

RunResult apda_run(const problems::SaddleProblem& problem,
                   std::span<const double> x0, std::span<const double> y0,
                   const ApdaConfig& config,
                   const IterationCallback& on_iteration = {});

}  // namespace apdakit::solvers
