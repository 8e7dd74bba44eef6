#include "apdakit/diag/stepsize_check.hpp"

#include <cmath>
#include <limits>

namespace apdakit::diag {

namespace {

void flag(StepsizeCheckReport& report, std::int64_t k, const char* what) {
  ++report.violations;
  if (report.first_violation.empty())
    report.first_violation = "k=" + std::to_string(k) + ": " + what;
}

}  // namespace

StepsizeCheckReport check_stepsize_invariants(
    std::span<const IterationRecord> trace, solvers::ApdaVariant variant,
    double beta, double c, double norm_A) {
  StepsizeCheckReport report;
  report.tau_min = std::numeric_limits<double>::infinity();
  const bool base = variant == solvers::ApdaVariant::kBase;
  const double tl_limit = base ? 0.5 : 0.25;
  const double a2 = norm_A * norm_A;

  double lipschitz_max = 0.0;
  const IterationRecord* prev = nullptr;
  for (const IterationRecord& rec : trace) {
    if (!rec.theta || !rec.lipschitz_estimate) continue;  // not an adaptive row
    ++report.records_checked;
    const double tau = rec.tau;
    const double theta = *rec.theta;
    const double lk = *rec.lipschitz_estimate;
    lipschitz_max = std::max(lipschitz_max, lk);
    report.tau_min = std::min(report.tau_min, tau);

    // growth cap tau_k <= tau_{k-1} sqrt(1 + theta_{k-1}) (1 + 1e-14);
    // only meaningful on consecutive records (thinned traces skip it)
    if (prev && prev->k + 1 == rec.k) {
      const double half_theta = base ? *prev->theta : 0.5 * *prev->theta;
      const double cap = prev->tau * std::sqrt(1.0 + half_theta);
      if (tau > cap * (1.0 + 1e-14)) flag(report, rec.k, "growth cap exceeded");
    }

    // tau_k L_k below 1/2 (base) or 1/4 (strongly convex); the product
    // attains the limit in floating point when L_k dwarfs ||A||
    const double tl = tau * lk;
    const bool tl_ok = norm_A > 0.0 ? tl <= tl_limit * (1.0 + 1e-14)
                                    : tl <= tl_limit * (1.0 + 1e-12);
    if (!tl_ok) flag(report, rec.k, "tau_k L_k bound violated");
    if (tl_limit > 0.0)
      report.worst_tl_margin =
          std::min(report.worst_tl_margin, (tl_limit - tl) / tl_limit);

    if (theta > 2.0 * (1.0 + 1e-12)) flag(report, rec.k, "theta_k > 2");

    // valid interval tau_k < 1/(L_k + sqrt(L_k^2 + 2 (beta/(1-c)) ||A||^2));
    // equality at the last ulp (noise-dominated L_k near convergence) is
    // not a violation
    if (norm_A > 0.0) {
      const double upper =
          1.0 / (lk + std::sqrt(lk * lk + 2.0 * (beta / (1.0 - c)) * a2));
      if (tau > upper * (1.0 + 1e-14))
        flag(report, rec.k, "tau_k outside valid interval");
    } else if (lk > 0.0 && tau > (1.0 + 1e-12) / (2.0 * lk)) {
      flag(report, rec.k, "tau_k outside valid interval (||A|| = 0)");
    }

    prev = &rec;
  }

  report.tau_floor =
      base ? 0.5 / std::sqrt(lipschitz_max * lipschitz_max +
                             (beta / (1.0 - c)) * a2)
           : 0.5 / std::sqrt(4.0 * lipschitz_max * lipschitz_max + beta * a2);
  report.floor_ok = report.records_checked == 0 ||
                    report.tau_min >= report.tau_floor * (1.0 - 1e-12);
  return report;
}

}  // namespace apdakit::diag
