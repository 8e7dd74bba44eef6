#include "apdakit/solvers/apda.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "apdakit/kernels/kernels.hpp"
#include "apdakit/linop/norms.hpp"
#include "apdakit/prox/prox.hpp"
#include "internal.hpp"

namespace apdakit::solvers {

namespace internal {

double resolve_norm_a(const problems::SaddleProblem& problem,
                      double configured) {
  if (configured >= 0.0) return configured;
  if (auto hint = problem.A->norm_hint()) return *hint;
  return linop::operator_norm(*problem.A);
}

InvariantMode resolve_invariants(const problems::SaddleProblem& problem,
                                 InvariantMode configured) {
  if (configured != InvariantMode::kFromProblem) return configured;
  return problem.convexity == problems::Convexity::kConvex
             ? InvariantMode::kThrow
             : InvariantMode::kWarn;
}

void InvariantReporter::report(std::int64_t k, const std::string& message) {
  ++violations;
  if (mode == InvariantMode::kThrow)
    throw std::logic_error("solver invariant violated at k=" +
                           std::to_string(k) + ": " + message);
  if (mode == InvariantMode::kWarn && violations <= 5)
    std::fprintf(stderr, "[apdakit] warning: invariant at k=%lld: %s\n",
                 static_cast<long long>(k), message.c_str());
}

std::optional<double> reference_energy(const problems::SaddleProblem& problem,
                                       std::span<const double> x,
                                       std::span<const double> y,
                                       double beta) {
  if (!problem.reference) return std::nullopt;
  const auto& ref = *problem.reference;
  return kernels::diff_nrm2_sq(x, ref.x) +
         kernels::diff_nrm2_sq(y, ref.y) / beta;
}

}  // namespace internal

double local_lipschitz(std::span<const double> x_cur,
                       std::span<const double> x_prev,
                       std::span<const double> grad_cur,
                       std::span<const double> grad_prev) {
  const double dg2 = kernels::diff_nrm2_sq(grad_cur, grad_prev);
  if (!std::isfinite(dg2)) {
    const bool cur_bad = !std::isfinite(kernels::nrm2_sq(grad_cur));
    throw std::runtime_error(
        std::string("local_lipschitz: non-finite gradient at ") +
        (cur_bad ? "current" : "previous") + " iterate");
  }
  const double dx2 = kernels::diff_nrm2_sq(x_cur, x_prev);
  if (dx2 == 0.0) return 0.0;  // coincident iterates
  return std::sqrt(dg2) / std::sqrt(dx2);
}

StepSizes apda_stepsize(double lipschitz_estimate,
                        std::optional<double> tau_prev, double theta_prev,
                        const ApdaConfig& config) {
  if (config.beta <= 0.0)
    throw std::invalid_argument("apda_stepsize: beta must be positive");
  if (config.c < 0.0 || config.c >= 1.0)
    throw std::invalid_argument("apda_stepsize: c must lie in [0, 1)");
  if (config.norm_A < 0.0)
    throw std::invalid_argument("apda_stepsize: norm_A must be resolved");
  if (lipschitz_estimate < 0.0)
    throw std::invalid_argument("apda_stepsize: negative Lipschitz estimate");

  const double lk = lipschitz_estimate;
  const double a2 = config.norm_A * config.norm_A;
  double curvature_term;
  if (config.variant == ApdaVariant::kBase) {
    curvature_term =
        2.0 * std::sqrt(lk * lk + (config.beta / (1.0 - config.c)) * a2);
  } else {
    curvature_term = 2.0 * std::sqrt(4.0 * lk * lk + config.beta * a2);
  }

  StepSizes out;
  if (!tau_prev) {
    // tau_0 = infinity: the growth cap cannot bind
    if (curvature_term == 0.0)
      throw std::invalid_argument(
          "apda_stepsize: degenerate problem: unbounded stepsize (L_k = 0 "
          "and ||A|| = 0)");
    out.tau = 1.0 / curvature_term;
    out.theta = 0.0;
  } else {
    const double half_theta =
        config.variant == ApdaVariant::kBase ? theta_prev : 0.5 * theta_prev;
    double growth_cap = *tau_prev * std::sqrt(1.0 + half_theta);
    if (config.fault_growth_cap) growth_cap = *tau_prev * (1.0 + theta_prev);
    out.tau = curvature_term == 0.0
                  ? growth_cap
                  : std::min(1.0 / curvature_term, growth_cap);
    out.theta = out.tau / *tau_prev;
  }
  out.sigma = config.beta * out.tau;
  return out;
}

namespace {

using internal::InvariantReporter;

void check_step_invariants(InvariantReporter& reporter, std::int64_t k,
                           const StepSizes& s, double lk,
                           std::optional<double> tau_prev, double theta_prev,
                           const ApdaConfig& config) {
  if (reporter.mode == InvariantMode::kOff) return;
  const double a = config.norm_A;
  const double rel = 1e-12;

  if (tau_prev) {
    const double half_theta =
        config.variant == ApdaVariant::kBase ? theta_prev : 0.5 * theta_prev;
    const double cap = *tau_prev * std::sqrt(1.0 + half_theta);
    if (s.tau > cap * (1.0 + 1e-14))
      reporter.report(k, "stepsize growth cap exceeded (tau=" +
                             std::to_string(s.tau) + ", cap=" +
                             std::to_string(cap) + ")");
  }

  // strict in exact arithmetic when ||A|| > 0, but the product rounds to
  // the limit itself once L_k dwarfs ||A|| (noise-dominated estimates
  // after convergence); with ||A|| = 0 the formula attains it exactly
  const double limit = config.variant == ApdaVariant::kBase ? 0.5 : 0.25;
  const double tl = s.tau * lk;
  const bool tl_ok =
      a > 0.0 ? tl <= limit * (1.0 + 1e-14) : tl <= limit * (1.0 + rel);
  if (!tl_ok)
    reporter.report(k, "tau_k * L_k = " + std::to_string(tl) +
                           " outside the admissible bound " +
                           std::to_string(limit));

  if (s.theta > 2.0 * (1.0 + rel))
    reporter.report(k, "theta_k = " + std::to_string(s.theta) + " > 2");

  // valid interval (0, 1 / (L_k + sqrt(L_k^2 + 2 (beta/(1-c)) ||A||^2)));
  // strict in exact arithmetic, but for L_k >> ||A|| the two sides agree
  // to the last ulp, so equality within 1e-14 relative is accepted
  if (a > 0.0) {
    const double upper =
        1.0 / (lk + std::sqrt(lk * lk +
                              2.0 * (config.beta / (1.0 - config.c)) * a * a));
    if (s.tau > upper * (1.0 + 1e-14))
      reporter.report(k, "tau_k = " + std::to_string(s.tau) +
                             " outside the valid interval (upper " +
                             std::to_string(upper) + ")");
  } else if (lk > 0.0) {
    if (s.tau > (1.0 + rel) / (2.0 * lk))
      reporter.report(k, "tau_k exceeds 1/(2 L_k) with ||A|| = 0");
  }
}

}  // namespace

RunResult apda_run(const problems::SaddleProblem& problem,
                   std::span<const double> x0, std::span<const double> y0,
                   const ApdaConfig& config,
                   const IterationCallback& on_iteration) {
  problem.validate();
  const std::size_t n = problem.primal_dim();
  const std::size_t m = problem.dual_dim();
  if (x0.size() != n || y0.size() != m)
    throw std::invalid_argument("apda_run: starting point dimension mismatch");
  if (config.tau_init <= 0.0)
    throw std::invalid_argument("apda_run: tau_init must be positive");
  if (config.max_iters <= 0)
    throw std::invalid_argument("apda_run: max_iters must be positive");

  ApdaConfig cfg = config;
  cfg.norm_A = internal::resolve_norm_a(problem, config.norm_A);
  InvariantReporter reporter{
      internal::resolve_invariants(problem, config.invariants), 0};

  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed_ns = [&t_start] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t_start)
        .count();
  };

  // x_{k-1}, x_k, x_{k+1}, y_k, y_{k+1}
  std::vector<double> x_prev(x0.begin(), x0.end());
  std::vector<double> x_cur(n), x_next(n);
  std::vector<double> y_cur(y0.begin(), y0.end());
  std::vector<double> y_next(m);
  std::vector<double> grad_prev(n), grad_cur(n);
  std::vector<double> aty(n);                 // A^T y_k, cached
  std::vector<double> ax_cur(m), ax_prev(m);  // A x_k, reconstructed
  std::vector<double> x_tilde(n), ax_tilde(m), dual_arg(m), dual_prox(m);

  // warm step: x_1 = x_0 - tau_init (grad f(x_0) + A^T y_0)
  problem.f->value_and_gradient(x_prev, grad_prev);
  problem.A->adjoint_apply(y_cur, aty);
  kernels::descent_step(x_prev, cfg.tau_init, grad_prev, aty, x_cur);

  std::optional<double> tau_prev;
  double theta_prev = 1.0;  // theta_0; dead under the tau_0 sentinel
  RunResult result;
  result.summary.tau_min = std::numeric_limits<double>::infinity();
  result.summary.tau_max = 0.0;

  std::int64_t k = 0;
  while (k < cfg.max_iters) {
    ++k;
    const double f_cur = problem.f->value_and_gradient(x_cur, grad_cur);
    const bool finite_ok =
        std::isfinite(f_cur) && std::isfinite(kernels::nrm2_sq(grad_cur));
    if (!finite_ok) {
      diag::IterationRecord rec;
      rec.k = k;
      rec.f_value = f_cur;
      rec.full_objective = f_cur;
      rec.wall_time_ns = elapsed_ns();
      if (on_iteration)
        on_iteration(rec, SolverView{x_prev, x_cur, x_cur, y_cur, y_cur});
      result.stop = StopReason::kNonFinite;
      result.x = std::move(x_prev);  // last finite iterate
      result.y = std::move(y_cur);
      result.summary.iterations = k;
      result.summary.wall_time_ns = elapsed_ns();
      return result;
    }

    const double lk = local_lipschitz(x_cur, x_prev, grad_cur, grad_prev);
    const StepSizes steps = apda_stepsize(lk, tau_prev, theta_prev, cfg);
    check_step_invariants(reporter, k, steps, lk, tau_prev, theta_prev, cfg);

    // x~_k = x_k + theta_k (x_k - x_{k-1})
    kernels::extrapolate(x_cur, steps.theta, x_prev, x_tilde);
    problem.A->apply(x_tilde, ax_tilde);
    // recover A x_k from A x~_k = (1+theta) A x_k - theta A x_{k-1}
    if (k == 1) {
      ax_cur = ax_tilde;  // theta_1 = 0
    } else {
      for (std::size_t i = 0; i < m; ++i)
        ax_cur[i] =
            (ax_tilde[i] + steps.theta * ax_prev[i]) / (1.0 + steps.theta);
    }

    // y_{k+1} = prox_{sigma_k g*}(y_k + sigma_k A x~_k)
    kernels::add_scaled(y_cur, steps.sigma, ax_tilde, dual_arg);
    prox::prox_g_conj(problem.reg, steps.sigma, dual_arg, y_next);

    // primal residual ||grad f(x_k) + A^T y_k|| from the cached A^T y_k;
    // x_tilde is free at this point and serves as scratch
    for (std::size_t i = 0; i < n; ++i) x_tilde[i] = grad_cur[i] + aty[i];
    const double primal_res = std::sqrt(kernels::nrm2_sq(x_tilde));

    // x_{k+1} = x_k - tau_k (grad f(x_k) + A^T y_{k+1})
    problem.A->adjoint_apply(y_next, aty);  // becomes A^T y_{k+1}
    kernels::descent_step(x_cur, steps.tau, grad_cur, aty, x_next);

    // dual residual ||y_k - prox_{sigma_k g*}(y_k + sigma_k A x_k)|| / sigma_k
    kernels::add_scaled(y_cur, steps.sigma, ax_cur, dual_arg);
    prox::prox_g_conj(problem.reg, steps.sigma, dual_arg, dual_prox);
    const double dual_res =
        std::sqrt(kernels::diff_nrm2_sq(y_cur, dual_prox)) / steps.sigma;

    diag::IterationRecord rec;
    rec.k = k;
    rec.tau = steps.tau;
    rec.sigma = steps.sigma;
    rec.theta = steps.theta;
    rec.lipschitz_estimate = lk;
    rec.f_value = f_cur;
    rec.full_objective = f_cur + problem.reg.value(ax_cur);
    rec.primal_residual = primal_res;
    rec.dual_residual = dual_res;
    rec.energy = internal::reference_energy(problem, x_cur, y_cur, cfg.beta);
    rec.wall_time_ns = elapsed_ns();

    if (on_iteration)
      on_iteration(rec, SolverView{x_prev, x_cur, x_next, y_cur, y_next});

    result.summary.iterations = k;
    result.summary.final_objective = rec.full_objective;
    result.summary.final_primal_residual = primal_res;
    result.summary.final_dual_residual = dual_res;
    result.summary.tau_min = std::min(result.summary.tau_min, steps.tau);
    result.summary.tau_max = std::max(result.summary.tau_max, steps.tau);

    const bool converged =
        cfg.residual_tol > 0.0 &&
        std::hypot(primal_res, dual_res) <= cfg.residual_tol;

    // shift the recurrence
    std::swap(x_prev, x_cur);
    std::swap(x_cur, x_next);
    std::swap(grad_prev, grad_cur);
    std::swap(y_cur, y_next);
    std::swap(ax_prev, ax_cur);
    tau_prev = steps.tau;
    theta_prev = steps.theta;

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

}  // namespace apdakit::solvers
