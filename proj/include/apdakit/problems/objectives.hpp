#pragma once

// Smooth objectives f (value + gradient oracles). Objects are immutable
// after construction and the oracles are pure.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "apdakit/linop/linop.hpp"

namespace apdakit::problems {

enum class ObjectiveKind {
  kLogistic,
  kMaskedLeastSquares,
  kPhaseRetrieval,
  kQuadratic,
};

class SmoothObjective {
 public:
  virtual ~SmoothObjective() = default;

  std::size_t dim() const { return dim_; }
  virtual ObjectiveKind kind() const = 0;

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;
  // Joint evaluation; the solvers call this once per iteration.
  double value_and_gradient(std::span<const double> x,
                            std::span<double> grad) const;

 protected:
  explicit SmoothObjective(std::size_t dim);

  virtual double value_impl(std::span<const double> x) const = 0;
  virtual double value_and_gradient_impl(std::span<const double> x,
                                         std::span<double> grad) const = 0;

 private:
  std::size_t dim_;
};

using ObjectivePtr = std::shared_ptr<const SmoothObjective>;

// f(x) = sum_i log(1 + exp(-b_i <q_i, x>)), labels b_i in {-1, +1}.
// Evaluated in the log1p form that stays finite for large margins.
class LogisticObjective final : public SmoothObjective {
 public:
  LogisticObjective(std::shared_ptr<const linop::CsrOperator> features,
                    std::vector<double> labels);

  ObjectiveKind kind() const override { return ObjectiveKind::kLogistic; }
  std::size_t num_samples() const { return labels_.size(); }
  const linop::CsrOperator& features() const { return *features_; }
  const std::vector<double>& labels() const { return labels_; }

 protected:
  double value_impl(std::span<const double> x) const override;
  double value_and_gradient_impl(std::span<const double> x,
                                 std::span<double> grad) const override;

 private:
  std::shared_ptr<const linop::CsrOperator> features_;
  std::vector<double> labels_;
};

// f(x) = 1/2 ||b - P x||^2 for a selection operator P.
class MaskedLeastSquaresObjective final : public SmoothObjective {
 public:
  MaskedLeastSquaresObjective(linop::OperatorPtr selection,
                              std::vector<double> b);

  ObjectiveKind kind() const override {
    return ObjectiveKind::kMaskedLeastSquares;
  }
  const linop::LinearOperator& selection() const { return *selection_; }
  const std::vector<double>& b() const { return b_; }

 protected:
  double value_impl(std::span<const double> x) const override;
  double value_and_gradient_impl(std::span<const double> x,
                                 std::span<double> grad) const override;

 private:
  linop::OperatorPtr selection_;
  std::vector<double> b_;
};

// f(x) = 1/(4m) sum_i (b_i - (Mx)_i^2)^2 with the measurement matrices
// flattened into the rows of M. Nonconvex.
class PhaseRetrievalObjective final : public SmoothObjective {
 public:
  PhaseRetrievalObjective(std::shared_ptr<const linop::CsrOperator> stack,
                          std::vector<double> b);

  ObjectiveKind kind() const override { return ObjectiveKind::kPhaseRetrieval; }
  const linop::CsrOperator& measurements() const { return *stack_; }
  const std::vector<double>& b() const { return b_; }

 protected:
  double value_impl(std::span<const double> x) const override;
  double value_and_gradient_impl(std::span<const double> x,
                                 std::span<double> grad) const override;

 private:
  std::shared_ptr<const linop::CsrOperator> stack_;
  std::vector<double> b_;
};

// f(x) = 1/2 x^T H x - c^T x, H symmetric positive semidefinite
// (row-major). Spectrum bounds may be attached for rate certificates.
class QuadraticObjective final : public SmoothObjective {
 public:
  QuadraticObjective(std::size_t dim, std::vector<double> hessian,
                     std::vector<double> linear);

  ObjectiveKind kind() const override { return ObjectiveKind::kQuadratic; }
  const std::vector<double>& hessian() const { return hessian_; }
  const std::vector<double>& linear() const { return linear_; }

  void set_spectrum_bounds(double mu, double smoothness);
  double mu() const { return mu_; }
  double smoothness() const { return smoothness_; }

 protected:
  double value_impl(std::span<const double> x) const override;
  double value_and_gradient_impl(std::span<const double> x,
                                 std::span<double> grad) const override;

 private:
  std::vector<double> hessian_;
  std::vector<double> linear_;
  double mu_ = 0.0;
  double smoothness_ = 0.0;
};

}  // namespace apdakit::problems
