#pragma once

// Fixed-stepsize baselines: the primal-dual method with constant
// (tau, sigma) and extrapolation parameter 1, and FISTA for the
// A = identity benchmarks.

#include <cstdint>
#include <span>

#include "apdakit/problems/saddle_problem.hpp"
#include "apdakit/solvers/apda.hpp"

namespace apdakit::solvers {

struct CvaConfig {
  double tau = 0.0;
  double sigma = 0.0;
  double lipschitz_global = 0.0;  // global smoothness constant of f
  double norm_A = -1.0;           // negative: resolve from the operator
  std::int64_t max_iters = 1000;
  double residual_tol = 0.0;
  // Skip the (1/tau - L)(1/sigma) >= ||A||^2 validity gate; for
  // heuristic runs on problems with no global L.
  bool override_validity_gate = false;
};

// Throws std::invalid_argument quoting the gate values when the
// stepsizes fail the validity condition and no override is set.
RunResult cva_run(const problems::SaddleProblem& problem,
                  std::span<const double> x0, std::span<const double> y0,
                  const CvaConfig& config,
                  const IterationCallback& on_iteration = {});

struct FistaConfig {
  double lipschitz_global = 0.0;
  std::int64_t max_iters = 1000;
  // optional stop on L * ||x_{k+1} - x_k||; 0 disables
  double step_residual_tol = 0.0;
};

// Accelerated proximal gradient on f + g. Requires the regularizer's
// primal prox (l1 or zero). The run result has an empty dual vector;
// records leave sigma/dual_residual empty and report theta as the
// momentum coefficient.
RunResult fista_run(const problems::SmoothObjective& f,
                    const prox::Regularizer& reg, std::span<const double> x0,
                    const FistaConfig& config,
                    const IterationCallback& on_iteration = {});

}  // namespace apdakit::solvers
