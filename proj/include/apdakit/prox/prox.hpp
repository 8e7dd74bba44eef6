#pragma once

// Regularizers g and their proximal maps, in both primal form (prox_g,
// used by FISTA) and conjugate form (prox of sigma*g*, used by the dual
// step of the primal-dual solvers).

#include <cstddef>
#include <span>
#include <vector>

namespace apdakit::prox {

enum class RegularizerKind {
  kL1,       // g(z) = lambda * ||z||_1
  kGroupL21, // g(z) = lambda * sum_p ||(z_p, z_{p+n})||_2  (pairs at offset n)
  kZero,     // g = 0
};

// For kGroupL21 the dual vector has length 2*num_groups and group p is
// the pair (z[p], z[p + num_groups]) -- the horizontal/vertical stacking
// of GradientOperator2D.
class Regularizer {
 public:
  static Regularizer l1(double lambda);
  static Regularizer group_l21(double lambda, std::size_t num_groups);
  static Regularizer zero();

  RegularizerKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  std::size_t num_groups() const { return num_groups_; }

  // g(z). For kGroupL21, z must have length 2*num_groups.
  double value(std::span<const double> z) const;

  // g*(y): 0 when y is (within feasibility_tol, relative) inside dom g*,
  // +infinity otherwise. l1: ||y||_inf <= lambda; group: every group norm
  // <= lambda; zero: y = 0.
  double conjugate_value(std::span<const double> y,
                         double feasibility_tol = 1e-9) const;

 private:
  Regularizer(RegularizerKind kind, double lambda, std::size_t num_groups);

  RegularizerKind kind_;
  double lambda_;
  std::size_t num_groups_;  // kGroupL21 only
};

// out = prox_{t g}(z) = argmin_u { g(u) + ||z - u||^2 / (2t) }
void prox_g(const Regularizer& reg, double t, std::span<const double> z,
            std::span<double> out);

// out = prox_{sigma g*}(z). For l1 this is the componentwise clamp to
// [-lambda, lambda] (independent of sigma); for group-l2-1 the per-group
// projection onto the l2 ball of radius lambda; for zero the 0 vector.
void prox_g_conj(const Regularizer& reg, double sigma,
                 std::span<const double> z, std::span<double> out);

// Same map through the Moreau identity,
//   prox_{sigma g*}(z) = z - sigma * prox_{g/sigma}(z/sigma),
// kept as an independent cross-check of prox_g_conj.
void prox_conj_via_moreau(const Regularizer& reg, double sigma,
                          std::span<const double> z, std::span<double> out);

std::vector<double> prox_g(const Regularizer& reg, double t,
                           std::span<const double> z);
std::vector<double> prox_g_conj(const Regularizer& reg, double sigma,
                                std::span<const double> z);
std::vector<double> prox_conj_via_moreau(const Regularizer& reg, double sigma,
                                         std::span<const double> z);

}  // namespace apdakit::prox
