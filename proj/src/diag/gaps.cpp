#include "apdakit/diag/gaps.hpp"

#include <cmath>
#include <limits>

#include "apdakit/kernels/kernels.hpp"
#include "apdakit/prox/prox.hpp"

namespace apdakit::diag {

double primal_gap(const problems::SaddleProblem& problem,
                  std::span<const double> x_prime,
                  std::span<const double> y_prime, std::span<const double> x) {
  const std::vector<double> aty = problem.A->adjoint_apply(y_prime);
  double inner = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    inner += (x[i] - x_prime[i]) * aty[i];
  return problem.f->value(x) - problem.f->value(x_prime) + inner;
}

double dual_gap(const problems::SaddleProblem& problem,
                std::span<const double> x_prime,
                std::span<const double> y_prime, std::span<const double> y) {
  const double gy = problem.reg.conjugate_value(y);
  const double gyp = problem.reg.conjugate_value(y_prime);
  if (std::isinf(gy) || std::isinf(gyp))
    return std::numeric_limits<double>::infinity();
  const std::vector<double> ax = problem.A->apply(x_prime);
  double inner = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    inner += ax[i] * (y[i] - y_prime[i]);
  return gy - gyp - inner;
}

double gap(const problems::SaddleProblem& problem,
           std::span<const double> x_prime, std::span<const double> y_prime,
           std::span<const double> x, std::span<const double> y) {
  return primal_gap(problem, x_prime, y_prime, x) +
         dual_gap(problem, x_prime, y_prime, y);
}

double Residuals::combined() const { return std::hypot(primal, dual); }

Residuals saddle_residuals(const problems::SaddleProblem& problem,
                           std::span<const double> x,
                           std::span<const double> y, double sigma) {
  Residuals out;
  const std::vector<double> grad = [&] {
    std::vector<double> g(problem.primal_dim());
    problem.f->gradient(x, g);
    return g;
  }();
  const std::vector<double> aty = problem.A->adjoint_apply(y);
  double acc = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double r = grad[i] + aty[i];
    acc += r * r;
  }
  out.primal = std::sqrt(acc);

  std::vector<double> arg = problem.A->apply(x);
  for (std::size_t i = 0; i < arg.size(); ++i) arg[i] = y[i] + sigma * arg[i];
  const std::vector<double> prox = prox::prox_g_conj(problem.reg, sigma, arg);
  out.dual = std::sqrt(kernels::diff_nrm2_sq(y, prox)) / sigma;
  return out;
}

}  // namespace apdakit::diag
