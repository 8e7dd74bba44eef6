#pragma once

// The saddle-point problem triple min_x max_y <Ax, y> + f(x) - g*(y).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apdakit/linop/linop.hpp"
#include "apdakit/problems/objectives.hpp"
#include "apdakit/prox/prox.hpp"

namespace apdakit::problems {

struct ReferenceSolution {
  std::vector<double> x;
  std::vector<double> y;
  double objective = 0.0;  // F(x*) = f(x*) + g(Ax*)
  // how the reference was obtained (solver, iterations, residual gate)
  std::string protocol;
};

enum class Convexity { kConvex, kNonconvexHeuristic };

struct SaddleProblem {
  ObjectivePtr f;
  prox::Regularizer reg = prox::Regularizer::zero();
  linop::OperatorPtr A;
  std::optional<ReferenceSolution> reference;
  Convexity convexity = Convexity::kConvex;

  std::size_t primal_dim() const { return A->in_dim(); }
  std::size_t dual_dim() const { return A->out_dim(); }

  // F(x) = f(x) + g(Ax)
  double full_objective(std::span<const double> x) const;
  double regularizer_at(std::span<const double> ax) const {
    return reg.value(ax);
  }

  // Throws unless f, A and reg dimensions are mutually consistent.
  void validate() const;
};

}  // namespace apdakit::problems
