#include "apdakit/problems/objectives.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "apdakit/kernels/kernels.hpp"

namespace apdakit::problems {

namespace {

// log(1 + exp(-s)) without overflow on either tail
inline double log1p_exp_neg(double s) {
  if (s >= 0.0) return std::log1p(std::exp(-s));
  return -s + std::log1p(std::exp(s));
}

}  // namespace

SmoothObjective::SmoothObjective(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("SmoothObjective: dim must be positive");
}

double SmoothObjective::value(std::span<const double> x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("f_value: dimension mismatch (got " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim_) + ")");
  return value_impl(x);
}

void SmoothObjective::gradient(std::span<const double> x,
                               std::span<double> out) const {
  value_and_gradient(x, out);
}

double SmoothObjective::value_and_gradient(std::span<const double> x,
                                           std::span<double> grad) const {
  if (x.size() != dim_ || grad.size() != dim_)
    throw std::invalid_argument("f_gradient: dimension mismatch (got " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim_) + ")");
  return value_and_gradient_impl(x, grad);
}

// ---- logistic --------------------------------------------------------------

LogisticObjective::LogisticObjective(
    std::shared_ptr<const linop::CsrOperator> features,
    std::vector<double> labels)
    : SmoothObjective(features ? features->in_dim() : 0),
      features_(std::move(features)),
      labels_(std::move(labels)) {
  if (labels_.size() != features_->out_dim())
    throw std::invalid_argument("LogisticObjective: label count " +
                                std::to_string(labels_.size()) +
                                " != sample count " +
                                std::to_string(features_->out_dim()));
  if (labels_.empty())
    throw std::invalid_argument("LogisticObjective: empty data");
  for (double b : labels_)
    if (b != 1.0 && b != -1.0)
      throw std::invalid_argument("LogisticObjective: labels must be -1 or +1");
}

double LogisticObjective::value_impl(std::span<const double> x) const {
  std::vector<double> scores = features_->apply(x);
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    total += log1p_exp_neg(labels_[i] * scores[i]);
  return total;
}

double LogisticObjective::value_and_gradient_impl(std::span<const double> x,
                                                  std::span<double> grad) const {
  std::vector<double> scores = features_->apply(x);
  double total = 0.0;
  // weights -b_i * sigmoid(-b_i <q_i, x>) for the adjoint pass
  std::vector<double> weights(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double margin = labels_[i] * scores[i];
    total += log1p_exp_neg(margin);
    double sig;  // 1 / (1 + exp(margin)), overflow-safe
    if (margin >= 0.0) {
      const double e = std::exp(-margin);
      sig = e / (1.0 + e);
    } else {
      sig = 1.0 / (1.0 + std::exp(margin));
    }
    weights[i] = -labels_[i] * sig;
  }
  features_->adjoint_apply(weights, grad);
  return total;
}

// ---- masked least squares ---------------------------------------------------

MaskedLeastSquaresObjective::MaskedLeastSquaresObjective(
    linop::OperatorPtr selection, std::vector<double> b)
    : SmoothObjective(selection ? selection->in_dim() : 0),
      selection_(std::move(selection)),
      b_(std::move(b)) {
  if (b_.size() != selection_->out_dim())
    throw std::invalid_argument(
        "MaskedLeastSquaresObjective: b length mismatch");
}

double MaskedLeastSquaresObjective::value_impl(std::span<const double> x) const {
  std::vector<double> px = selection_->apply(x);
  return 0.5 * kernels::diff_nrm2_sq(b_, px);
}

double MaskedLeastSquaresObjective::value_and_gradient_impl(
    std::span<const double> x, std::span<double> grad) const {
  std::vector<double> px = selection_->apply(x);
  double total = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double r = px[i] - b_[i];
    total += r * r;
    px[i] = r;  // reuse as the residual
  }
  selection_->adjoint_apply(px, grad);
  return 0.5 * total;
}

// ---- phase retrieval ----------------------------------------------------------

PhaseRetrievalObjective::PhaseRetrievalObjective(
    std::shared_ptr<const linop::CsrOperator> stack, std::vector<double> b)
    : SmoothObjective(stack ? stack->in_dim() : 0),
      stack_(std::move(stack)),
      b_(std::move(b)) {
  if (b_.size() != stack_->out_dim())
    throw std::invalid_argument("PhaseRetrievalObjective: b length mismatch");
  if (b_.empty())
    throw std::invalid_argument("PhaseRetrievalObjective: no measurements");
}

double PhaseRetrievalObjective::value_impl(std::span<const double> x) const {
  std::vector<double> s = stack_->apply(x);
  const double m = static_cast<double>(b_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = b_[i] - s[i] * s[i];
    total += r * r;
  }
  return total / (4.0 * m);
}

double PhaseRetrievalObjective::value_and_gradient_impl(
    std::span<const double> x, std::span<double> grad) const {
  std::vector<double> s = stack_->apply(x);
  const double m = static_cast<double>(b_.size());
  double total = 0.0;
  std::vector<double> weights(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = b_[i] - s[i] * s[i];
    total += r * r;
    weights[i] = -r * s[i] / m;
  }
  stack_->adjoint_apply(weights, grad);
  return total / (4.0 * m);
}

// ---- quadratic -------------------------------------------------------------------

QuadraticObjective::QuadraticObjective(std::size_t dim,
                                       std::vector<double> hessian,
                                       std::vector<double> linear)
    : SmoothObjective(dim),
      hessian_(std::move(hessian)),
      linear_(std::move(linear)) {
  if (hessian_.size() != dim * dim)
    throw std::invalid_argument("QuadraticObjective: hessian size mismatch");
  if (linear_.size() != dim)
    throw std::invalid_argument("QuadraticObjective: linear term size mismatch");
}

void QuadraticObjective::set_spectrum_bounds(double mu, double smoothness) {
  mu_ = mu;
  smoothness_ = smoothness;
}

double QuadraticObjective::value_impl(std::span<const double> x) const {
  const std::size_t n = dim();
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    quad += x[i] * kernels::dot({hessian_.data() + i * n, n}, x);
  return 0.5 * quad - kernels::dot(linear_, x);
}

double QuadraticObjective::value_and_gradient_impl(std::span<const double> x,
                                                   std::span<double> grad) const {
  const std::size_t n = dim();
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hx = kernels::dot({hessian_.data() + i * n, n}, x);
    grad[i] = hx - linear_[i];
    quad += x[i] * hx;
  }
  return 0.5 * quad - kernels::dot(linear_, x);
}

}  // namespace apdakit::problems
