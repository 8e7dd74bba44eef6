#include "apdakit/solvers/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "apdakit/kernels/kernels.hpp"
#include "apdakit/prox/prox.hpp"
#include "internal.hpp"

namespace apdakit::solvers {

RunResult cva_run(const problems::SaddleProblem& problem,
                  std::span<const double> x0, std::span<const double> y0,
                  const CvaConfig& config,
                  const IterationCallback& on_iteration) {
  problem.validate();
  const std::size_t n = problem.primal_dim();
  const std::size_t m = problem.dual_dim();
  if (x0.size() != n || y0.size() != m)
    throw std::invalid_argument("cva_run: starting point dimension mismatch");
  if (config.tau <= 0.0 || config.sigma <= 0.0)
    throw std::invalid_argument("cva_run: stepsizes must be positive");
  if (config.max_iters <= 0)
    throw std::invalid_argument("cva_run: max_iters must be positive");

  const double norm_a = internal::resolve_norm_a(problem, config.norm_A);
  const double gate_lhs =
      (1.0 / config.tau - config.lipschitz_global) / config.sigma;
  const double gate_rhs = norm_a * norm_a;
  if (!config.override_validity_gate &&
      !(gate_lhs >= gate_rhs * (1.0 - 1e-12)))
    throw std::invalid_argument(
        "cva_run: stepsize validity condition failed: (1/tau - L)(1/sigma) = " +
        std::to_string(gate_lhs) + " < ||A||^2 = " + std::to_string(gate_rhs));

  const double beta = config.sigma / config.tau;
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed_ns = [&t_start] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t_start)
        .count();
  };

  // x_1 = x_0: the first extrapolation degenerates to x~_1 = x_1
  std::vector<double> x_prev(x0.begin(), x0.end());
  std::vector<double> x_cur(x0.begin(), x0.end());
  std::vector<double> x_next(n);
  std::vector<double> y_cur(y0.begin(), y0.end());
  std::vector<double> y_next(m);
  std::vector<double> grad_cur(n);
  std::vector<double> aty(n);
  std::vector<double> ax_cur(m), ax_prev(m);
  std::vector<double> x_tilde(n), ax_tilde(m), dual_arg(m), dual_prox(m);

  problem.A->adjoint_apply(y_cur, aty);

  RunResult result;
  result.summary.tau_min = config.tau;
  result.summary.tau_max = config.tau;

  std::int64_t k = 0;
  while (k < config.max_iters) {
    ++k;
    const double f_cur = problem.f->value_and_gradient(x_cur, grad_cur);
    const bool finite_ok =
        std::isfinite(f_cur) && std::isfinite(kernels::nrm2_sq(grad_cur));
    if (!finite_ok) {
      diag::IterationRecord rec;
      rec.k = k;
      rec.tau = config.tau;
      rec.sigma = config.sigma;
      rec.f_value = f_cur;
      rec.full_objective = f_cur;
      rec.wall_time_ns = elapsed_ns();
      if (on_iteration)
        on_iteration(rec, SolverView{x_prev, x_cur, x_cur, y_cur, y_cur});
      result.stop = StopReason::kNonFinite;
      result.x = std::move(x_prev);
      result.y = std::move(y_cur);
      result.summary.iterations = k;
      result.summary.wall_time_ns = elapsed_ns();
      return result;
    }

    // x~_k = 2 x_k - x_{k-1}
    kernels::extrapolate(x_cur, 1.0, x_prev, x_tilde);
    problem.A->apply(x_tilde, ax_tilde);
    if (k == 1) {
      ax_cur = ax_tilde;
    } else {
      for (std::size_t i = 0; i < m; ++i)
        ax_cur[i] = 0.5 * (ax_tilde[i] + ax_prev[i]);
    }

    kernels::add_scaled(y_cur, config.sigma, ax_tilde, dual_arg);
    prox::prox_g_conj(problem.reg, config.sigma, dual_arg, y_next);

    for (std::size_t i = 0; i < n; ++i) x_tilde[i] = grad_cur[i] + aty[i];
    const double primal_res = std::sqrt(kernels::nrm2_sq(x_tilde));

    problem.A->adjoint_apply(y_next, aty);
    kernels::descent_step(x_cur, config.tau, grad_cur, aty, x_next);

    kernels::add_scaled(y_cur, config.sigma, ax_cur, dual_arg);
    prox::prox_g_conj(problem.reg, config.sigma, dual_arg, dual_prox);
    const double dual_res =
        std::sqrt(kernels::diff_nrm2_sq(y_cur, dual_prox)) / config.sigma;

    diag::IterationRecord rec;
    rec.k = k;
    rec.tau = config.tau;
    rec.sigma = config.sigma;
    rec.theta = 1.0;
    rec.f_value = f_cur;
    rec.full_objective = f_cur + problem.reg.value(ax_cur);
    rec.primal_residual = primal_res;
    rec.dual_residual = dual_res;
    rec.energy = internal::reference_energy(problem, x_cur, y_cur, beta);
    rec.wall_time_ns = elapsed_ns();

    if (on_iteration)
      on_iteration(rec, SolverView{x_prev, x_cur, x_next, y_cur, y_next});

    result.summary.iterations = k;
    result.summary.final_objective = rec.full_objective;
    result.summary.final_primal_residual = primal_res;
    result.summary.final_dual_residual = dual_res;

    const bool converged =
        config.residual_tol > 0.0 &&
        std::hypot(primal_res, dual_res) <= config.residual_tol;

    std::swap(x_prev, x_cur);
    std::swap(x_cur, x_next);
    std::swap(y_cur, y_next);
    std::swap(ax_prev, ax_cur);

    if (converged) {
      result.stop = StopReason::kConverged;
      break;
    }
  }

  result.summary.wall_time_ns = elapsed_ns();
  result.x = std::move(x_cur);
  result.y = std::move(y_cur);
  return result;
}

RunResult fista_run(const problems::SmoothObjective& f,
                    const prox::Regularizer& reg, std::span<const double> x0,
                    const FistaConfig& config,
                    const IterationCallback& on_iteration) {
  if (x0.size() != f.dim())
    throw std::invalid_argument("fista_run: starting point dimension mismatch");
  if (config.lipschitz_global <= 0.0)
    throw std::invalid_argument("fista_run: positive global L required");
  if (reg.kind() == prox::RegularizerKind::kGroupL21)
    throw std::invalid_argument(
        "fista_run: regularizer prox not available in primal form");

  const double step = 1.0 / config.lipschitz_global;
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed_ns = [&t_start] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t_start)
        .count();
  };

  const std::size_t n = f.dim();
  std::vector<double> x_prev(x0.begin(), x0.end());
  std::vector<double> x_cur(x0.begin(), x0.end());
  std::vector<double> x_next(n);
  std::vector<double> z(x0.begin(), x0.end());  // momentum point
  std::vector<double> grad(n), w(n);
  double t_cur = 1.0;

  RunResult result;
  result.summary.tau_min = step;
  result.summary.tau_max = step;

  std::int64_t k = 0;
  while (k < config.max_iters) {
    ++k;
    f.value_and_gradient(z, grad);
    // x_{k+1} = prox_{g/L}(z_k - grad f(z_k)/L)
    kernels::add_scaled(z, -step, grad, w);
    prox::prox_g(reg, step, w, x_next);

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_cur * t_cur));
    const double momentum = (t_cur - 1.0) / t_next;
    kernels::extrapolate(x_next, momentum, x_cur, z);

    const double f_next = f.value(x_next);
    const double obj = f_next + reg.value(x_next);
    const double step_res =
        config.lipschitz_global * std::sqrt(kernels::diff_nrm2_sq(x_next, x_cur));

    diag::IterationRecord rec;
    rec.k = k;
    rec.tau = step;
    rec.theta = momentum;
    rec.lipschitz_estimate = config.lipschitz_global;
    rec.f_value = f_next;
    rec.full_objective = obj;
    rec.primal_residual = step_res;
    rec.wall_time_ns = elapsed_ns();

    if (!std::isfinite(f_next)) {
      if (on_iteration)
        on_iteration(rec, SolverView{x_prev, x_cur, x_next, {}, {}});
      result.stop = StopReason::kNonFinite;
      result.x = std::move(x_cur);
      result.summary.iterations = k;
      result.summary.wall_time_ns = elapsed_ns();
      return result;
    }

    if (on_iteration)
      on_iteration(rec, SolverView{x_prev, x_cur, x_next, {}, {}});

    result.summary.iterations = k;
    result.summary.final_objective = obj;
    result.summary.final_primal_residual = step_res;

    const bool converged = config.step_residual_tol > 0.0 &&
                           step_res <= config.step_residual_tol;

    std::swap(x_prev, x_cur);
    std::swap(x_cur, x_next);
    t_cur = t_next;

    if (converged) {
      result.stop = StopReason::kConverged;
      break;
    }
  }

  result.summary.wall_time_ns = elapsed_ns();
  result.x = std::move(x_cur);
  return result;
}

}  // namespace apdakit::solvers
