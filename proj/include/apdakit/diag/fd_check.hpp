#pragma once

// Central finite-difference gradient, the independent oracle for the
// analytic oracles in `problems`.

#include <span>
#include <vector>

#include "apdakit/problems/objectives.hpp"

namespace apdakit::diag {

// step h <= 0 selects the default 1e-6 * (1 + ||x||)
std::vector<double> finite_difference_gradient(
    const problems::SmoothObjective& objective, std::span<const double> x,
    double h = 0.0);

// ||grad_fd - grad|| / (1 + ||grad||)
double gradient_check_error(const problems::SmoothObjective& objective,
                            std::span<const double> x, double h = 0.0);

}  // namespace apdakit::diag
