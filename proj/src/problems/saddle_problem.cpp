#include "apdakit/problems/saddle_problem.hpp"

#include <stdexcept>
#include <string>

namespace apdakit::problems {

double SaddleProblem::full_objective(std::span<const double> x) const {
  return f->value(x) + reg.value(A->apply(x));
}

void SaddleProblem::validate() const {
  if (!f || !A) throw std::invalid_argument("SaddleProblem: missing f or A");
  if (f->dim() != A->in_dim())
    throw std::invalid_argument("SaddleProblem: f dim " +
                                std::to_string(f->dim()) + " != A in_dim " +
                                std::to_string(A->in_dim()));
  if (reg.kind() == prox::RegularizerKind::kGroupL21 &&
      2 * reg.num_groups() != A->out_dim())
    throw std::invalid_argument(
        "SaddleProblem: group layout does not partition the dual vector");
  if (reference) {
    if (reference->x.size() != primal_dim() ||
        reference->y.size() != dual_dim())
      throw std::invalid_argument("SaddleProblem: reference dimension mismatch");
  }
}

}  // namespace apdakit::problems
