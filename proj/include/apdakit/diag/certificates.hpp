#pragma once

// Quantitative convergence certificates: the O(1/k) restricted-gap bound
// for the ergodic iterates and the geometric contraction of the
// strongly-convex variant, with the rate constants
//   s = sqrt(4L^2 + beta ||A||^2),  t = sqrt(4 mu^2 + beta ||A||^2),
//   p = 1/2,  q = mu / (4s),
//   r = beta sigma_min^2 mu / (beta sigma_min^2 mu + 8 s^2 t + 4 L^2 s).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace apdakit::diag {

struct RateCertificate {
  double mu = 0.0;
  double smoothness = 0.0;  // L
  double beta = 0.0;
  double norm_A = 0.0;
  double sigma_min = 0.0;

  double s = 0.0;
  double t = 0.0;
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  double dual_weight = 0.0;  // T = sigma_min^2 mu / (8 s^2 t + 4 L^2 s)
  double contraction = 0.0;  // 1 - min{p, q, r}
};

RateCertificate make_rate_certificate(double mu, double smoothness,
                                      double beta, double norm_A,
                                      double sigma_min);

// Boundedness constant M = ||x1 - x||^2 + (1/beta)||y1 - y||^2
// + 1/2 ||x1 - x0||^2, maximized over the ball of the given radius
// around (x_star, y_star). Radius 0 gives the plain constant.
double boundedness_constant(std::span<const double> x1,
                            std::span<const double> y1,
                            std::span<const double> x0,
                            std::span<const double> x_star,
                            std::span<const double> y_star, double beta,
                            double ball_radius = 0.0);

struct GapBoundPoint {
  std::int64_t k = 0;
  double gap = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct GapBoundReport {
  std::vector<GapBoundPoint> points;
  double worst_ratio = 0.0;
  bool ok = false;
};

// Checks gap_k <= M(B) sqrt(L^2 + (beta/(1-c)) ||A||^2) / k at each
// measured k. Ratios above 1 + 1e-6 flag a violation.
GapBoundReport gap_bound_check(
    std::span<const std::pair<std::int64_t, double>> measured_gaps,
    double ball_constant, double smoothness, double beta, double c,
    double norm_A);

struct LinearRateReport {
  bool ok = false;
  std::int64_t worst_k = 0;
  double worst_margin = 0.0;     // min over k of bound_k - energy_k
  double empirical_rate = 0.0;   // exp(log-linear fit slope)
  double theoretical_rate = 0.0; // the certificate contraction
  std::string note;
};

// Checks energy_k <= contraction^k * m2 for every (k, energy) with
// k >= 2, and compares the fitted geometric rate against the
// certificate. Energies below `fit_floor` are excluded from the fit
// (they sit on the numerical noise floor).
LinearRateReport linear_rate_check(
    std::span<const std::pair<std::int64_t, double>> energies,
    const RateCertificate& certificate, double m2, double fit_floor = 1e-24);

}  // namespace apdakit::diag
