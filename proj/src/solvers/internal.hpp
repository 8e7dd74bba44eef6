#pragma once

// Shared plumbing between the solver translation units.

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "apdakit/problems/saddle_problem.hpp"
#include "apdakit/solvers/apda.hpp"

namespace apdakit::solvers::internal {

double resolve_norm_a(const problems::SaddleProblem& problem,
                      double configured);

InvariantMode resolve_invariants(const problems::SaddleProblem& problem,
                                 InvariantMode configured);

struct InvariantReporter {
  InvariantMode mode = InvariantMode::kThrow;
  int violations = 0;
  void report(std::int64_t k, const std::string& message);
};

std::optional<double> reference_energy(const problems::SaddleProblem& problem,
                                       std::span<const double> x,
                                       std::span<const double> y, double beta);

}  // namespace apdakit::solvers::internal
