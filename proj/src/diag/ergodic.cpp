#include "apdakit/diag/ergodic.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "apdakit/kernels/kernels.hpp"

namespace apdakit::diag {

ErgodicAccumulator::ErgodicAccumulator(std::size_t primal_dim,
                                       std::size_t dual_dim)
    : pending_x_(primal_dim, 0.0),
      settled_x_(primal_dim, 0.0),
      weighted_y_(dual_dim, 0.0) {}

void ErgodicAccumulator::update(std::int64_t k, double tau, double theta,
                                std::span<const double> x,
                                std::span<const double> y_next) {
  if (k != k_ + 1)
    throw std::logic_error("ErgodicAccumulator: out-of-order update (got k=" +
                           std::to_string(k) + ", expected " +
                           std::to_string(k_ + 1) + ")");
  if (x.size() != pending_x_.size() || y_next.size() != weighted_y_.size())
    throw std::invalid_argument("ErgodicAccumulator: dimension mismatch");

  if (k_ >= 1) {
    // finalize x_{k-1} with weight tau_{k-1}(1+theta_{k-1}) - tau_k theta_k
    const double correction = tau * theta;
    const double weight = pending_weight_ - correction;
    const double scale = pending_weight_ + correction + 1.0;
    if (weight < -1e-12 * scale)
      throw std::logic_error(
          "ErgodicAccumulator: negative ergodic weight (tau_k theta_k = " +
          std::to_string(correction) + " exceeds pending " +
          std::to_string(pending_weight_) + ")");
    kernels::axpy(weight, pending_x_, settled_x_);
  }

  std::copy(x.begin(), x.end(), pending_x_.begin());
  pending_weight_ = tau * (1.0 + theta);
  kernels::axpy(tau, y_next, weighted_y_);
  weight_sum_ += tau;
  k_ = k;
}

std::vector<double> ErgodicAccumulator::primal_average() const {
  if (k_ == 0) throw std::logic_error("ErgodicAccumulator: no updates yet");
  std::vector<double> out(settled_x_);
  kernels::axpy(pending_weight_, pending_x_, out);
  for (double& v : out) v /= weight_sum_;
  return out;
}

std::vector<double> ErgodicAccumulator::dual_average() const {
  if (k_ == 0) throw std::logic_error("ErgodicAccumulator: no updates yet");
  std::vector<double> out(weighted_y_);
  for (double& v : out) v /= weight_sum_;
  return out;
}

}  // namespace apdakit::diag
