#pragma once

// Gap functions and optimality residuals.
//   P_{x',y'}(x) = f(x) - f(x') + <x - x', A^T y'>
//   D_{x',y'}(y) = g*(y) - g*(y') - <A x', y - y'>
// Both are nonnegative when (x', y') is a saddle point and their sum is
// the primal-dual gap.

#include <span>

#include "apdakit/problems/saddle_problem.hpp"

namespace apdakit::diag {

double primal_gap(const problems::SaddleProblem& problem,
                  std::span<const double> x_prime,
                  std::span<const double> y_prime, std::span<const double> x);

// Returns +infinity (a marker, not an exception) when g* is infinite at
// y or y_prime.
double dual_gap(const problems::SaddleProblem& problem,
                std::span<const double> x_prime,
                std::span<const double> y_prime, std::span<const double> y);

double gap(const problems::SaddleProblem& problem,
           std::span<const double> x_prime, std::span<const double> y_prime,
           std::span<const double> x, std::span<const double> y);

struct Residuals {
  double primal = 0.0;  // ||grad f(x) + A^T y||
  double dual = 0.0;    // ||y - prox_{sigma g*}(y + sigma A x)|| / sigma
  double combined() const;
};

Residuals saddle_residuals(const problems::SaddleProblem& problem,
                           std::span<const double> x,
                           std::span<const double> y, double sigma);

}  // namespace apdakit::diag
