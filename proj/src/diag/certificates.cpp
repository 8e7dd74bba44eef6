#include "apdakit/diag/certificates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "apdakit/kernels/kernels.hpp"

namespace apdakit::diag {

RateCertificate make_rate_certificate(double mu, double smoothness,
                                      double beta, double norm_A,
                                      double sigma_min) {
  if (!(mu > 0.0) || smoothness < mu)
    throw std::invalid_argument("make_rate_certificate: need 0 < mu <= L");
  if (beta <= 0.0)
    throw std::invalid_argument("make_rate_certificate: beta must be positive");
  if (sigma_min < 0.0 || norm_A < 0.0)
    throw std::invalid_argument("make_rate_certificate: negative operator data");

  RateCertificate cert;
  cert.mu = mu;
  cert.smoothness = smoothness;
  cert.beta = beta;
  cert.norm_A = norm_A;
  cert.sigma_min = sigma_min;

  const double a2 = norm_A * norm_A;
  cert.s = std::sqrt(4.0 * smoothness * smoothness + beta * a2);
  cert.t = std::sqrt(4.0 * mu * mu + beta * a2);
  cert.p = 0.5;
  cert.q = mu / (4.0 * cert.s);
  const double mixed = 8.0 * cert.s * cert.s * cert.t +
                       4.0 * smoothness * smoothness * cert.s;
  const double coupled = beta * sigma_min * sigma_min * mu;
  cert.r = coupled / (coupled + mixed);
  cert.dual_weight = sigma_min * sigma_min * mu / mixed;
  // with A = 0 there is no dual coupling and the r-term is vacuous; the
  // contraction reduces to the adaptive gradient-descent factor
  double worst = std::min(cert.p, cert.q);
  if (norm_A > 0.0) worst = std::min(worst, cert.r);
  cert.contraction = 1.0 - worst;
  return cert;
}

double boundedness_constant(std::span<const double> x1,
                            std::span<const double> y1,
                            std::span<const double> x0,
                            std::span<const double> x_star,
                            std::span<const double> y_star, double beta,
                            double ball_radius) {
  const double dx = std::sqrt(kernels::diff_nrm2_sq(x1, x_star)) + ball_radius;
  const double dy = std::sqrt(kernels::diff_nrm2_sq(y1, y_star)) + ball_radius;
  const double warm = kernels::diff_nrm2_sq(x1, x0);
  return dx * dx + dy * dy / beta + 0.5 * warm;
}

GapBoundReport gap_bound_check(
    std::span<const std::pair<std::int64_t, double>> measured_gaps,
    double ball_constant, double smoothness, double beta, double c,
    double norm_A) {
  if (c < 0.0 || c >= 1.0)
    throw std::invalid_argument("gap_bound_check: c must lie in [0, 1)");
  const double rate =
      ball_constant * std::sqrt(smoothness * smoothness +
                                (beta / (1.0 - c)) * norm_A * norm_A);
  GapBoundReport report;
  report.ok = true;
  for (const auto& [k, gap] : measured_gaps) {
    if (k <= 0) throw std::invalid_argument("gap_bound_check: k must be positive");
    GapBoundPoint pt;
    pt.k = k;
    pt.gap = gap;
    pt.bound = rate / static_cast<double>(k);
    pt.ratio = pt.bound > 0.0 ? gap / pt.bound
                              : std::numeric_limits<double>::infinity();
    report.worst_ratio = std::max(report.worst_ratio, pt.ratio);
    if (!(pt.ratio <= 1.0 + 1e-6)) report.ok = false;
    report.points.push_back(pt);
  }
  return report;
}

LinearRateReport linear_rate_check(
    std::span<const std::pair<std::int64_t, double>> energies,
    const RateCertificate& certificate, double m2, double fit_floor) {
  if (!(certificate.mu > 0.0))
    throw std::invalid_argument("linear_rate_check: certificate missing mu");
  if (!(certificate.sigma_min > 0.0))
    throw std::invalid_argument("linear_rate_check: certificate missing sigma_min");

  LinearRateReport report;
  report.theoretical_rate = certificate.contraction;
  report.ok = true;
  report.worst_margin = std::numeric_limits<double>::infinity();

  const double log_rho = std::log(certificate.contraction);

  // bound check for every k >= 2
  for (const auto& [k, energy] : energies) {
    if (k < 2) continue;
    const double bound = std::exp(log_rho * static_cast<double>(k)) * m2;
    const double margin = bound - energy;
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_k = k;
    }
    if (!(energy <= bound)) report.ok = false;
  }

  // log-linear fit of the decaying segment
  double sk = 0.0, se = 0.0, skk = 0.0, ske = 0.0;
  std::int64_t count = 0;
  for (const auto& [k, energy] : energies) {
    if (k < 2 || energy <= fit_floor) continue;
    const double kd = static_cast<double>(k);
    const double le = std::log(energy);
    sk += kd;
    se += le;
    skk += kd * kd;
    ske += kd * le;
    ++count;
  }
  if (count >= 2) {
    const double denom = static_cast<double>(count) * skk - sk * sk;
    const double slope = (static_cast<double>(count) * ske - sk * se) / denom;
    report.empirical_rate = std::exp(slope);
    if (report.empirical_rate > certificate.contraction * (1.0 + 1e-9)) {
      report.ok = false;
      report.note = "empirical rate exceeds the certificate contraction";
    }
  } else {
    report.note = "too few points above the fit floor for a rate fit";
  }
  return report;
}

}  // namespace apdakit::diag
