#include "apdakit/diag/fd_check.hpp"

#include <cmath>

#include "apdakit/kernels/kernels.hpp"

namespace apdakit::diag {

std::vector<double> finite_difference_gradient(
    const problems::SmoothObjective& objective, std::span<const double> x,
    double h) {
  if (h <= 0.0) h = 1e-6 * (1.0 + std::sqrt(kernels::nrm2_sq(x)));
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double original = probe[i];
    probe[i] = original + h;
    const double up = objective.value(probe);
    probe[i] = original - h;
    const double down = objective.value(probe);
    probe[i] = original;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double gradient_check_error(const problems::SmoothObjective& objective,
                            std::span<const double> x, double h) {
  std::vector<double> analytic(x.size());
  objective.gradient(x, analytic);
  const std::vector<double> numeric = finite_difference_gradient(objective, x, h);
  return std::sqrt(kernels::diff_nrm2_sq(numeric, analytic)) /
         (1.0 + std::sqrt(kernels::nrm2_sq(analytic)));
}

}  // namespace apdakit::diag
