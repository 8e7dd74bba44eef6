#pragma once

// Running stepsize-weighted averages
//   S_k = sum tau_i,
//   X_k = (1/S_k) [tau_k (1+theta_k) x_k
//         + sum_{i<k} (tau_i (1+theta_i) - tau_{i+1} theta_{i+1}) x_i],
//   Y_k = (1/S_k) sum tau_i y_{i+1},
// maintained incrementally in O(dim) per update: the tau_k (1+theta_k)
// weight of the newest iterate stays pending until the next update
// supplies its -tau_{k+1} theta_{k+1} correction.

#include <cstdint>
#include <span>
#include <vector>

namespace apdakit::diag {

class ErgodicAccumulator {
 public:
  ErgodicAccumulator(std::size_t primal_dim, std::size_t dual_dim);

  // Feed iteration k (must arrive in order, starting at 1) with the
  // solver's (tau_k, theta_k, x_k, y_{k+1}). Throws on out-of-order
  // calls and on a negative finalized weight.
  void update(std::int64_t k, double tau, double theta,
              std::span<const double> x, std::span<const double> y_next);

  std::int64_t iterations() const { return k_; }
  double weight_sum() const { return weight_sum_; }  // S_k

  std::vector<double> primal_average() const;  // X_k
  std::vector<double> dual_average() const;    // Y_k

 private:
  std::int64_t k_ = 0;
  double weight_sum_ = 0.0;
  double pending_weight_ = 0.0;
  std::vector<double> pending_x_;
  std::vector<double> settled_x_;  // finalized weighted sum of x_1..x_{k-1}
  std::vector<double> weighted_y_;
};

}  // namespace apdakit::diag
