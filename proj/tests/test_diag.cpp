#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "apdakit/common/rng.hpp"
#include "apdakit/diag/certificates.hpp"
#include "apdakit/diag/ergodic.hpp"
#include "apdakit/diag/gaps.hpp"
#include "apdakit/diag/image_metrics.hpp"
#include "apdakit/problems/generators.hpp"
#include "apdakit/solvers/apda.hpp"
#include "support/test_oracles.hpp"

using namespace apdakit;
using namespace apdakit::diag;
using namespace apdakit::problems;
namespace ts = testsupport;

TEST_CASE("gaps vanish reflexively and are nonnegative at the saddle point") {
  const auto problem = make_quadratic_testproblem(8, 3, 0.5, 4.0, 60);
  Rng rng(61);
  const auto x = ts::random_vec(8, rng);
  const auto y = [&] {
    // a feasible dual point: project into the l1 conjugate box
    auto v = ts::random_vec(3, rng, 0.01);
    return v;
  }();

  CHECK(primal_gap(problem, x, y, x) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dual_gap(problem, x, y, y) == doctest::Approx(0.0).epsilon(1e-12));

  const auto& ref = *problem.reference;
  for (int probe = 0; probe < 50; ++probe) {
    const auto xp = ts::random_vec(8, rng);
    auto yp = ts::random_vec(3, rng, 0.01);
    CHECK(primal_gap(problem, ref.x, ref.y, xp) >= -1e-10);
    const double d = dual_gap(problem, ref.x, ref.y, yp);
    if (std::isfinite(d)) CHECK(d >= -1e-10);
  }
}

TEST_CASE("dual gap returns the infinity marker outside dom g*") {
  const auto problem = make_quadratic_testproblem(8, 3, 0.5, 4.0, 62);
  const std::vector<double> huge(3, 100.0);  // far outside the l1 box
  const auto& ref = *problem.reference;
  CHECK(std::isinf(dual_gap(problem, ref.x, ref.y, huge)));
}

TEST_CASE("gap matches an independent recomputation of the formulas") {
  const auto problem = make_quadratic_testproblem(6, 2, 0.5, 4.0, 63);
  Rng rng(64);
  const auto xp = ts::random_vec(6, rng);
  const auto yp = ts::random_vec(2, rng, 0.01);
  const auto x = ts::random_vec(6, rng);
  const auto y = ts::random_vec(2, rng, 0.01);

  // duplicate-formula oracle, written against the raw definitions
  const auto aty = problem.A->adjoint_apply(yp);
  double p_oracle = problem.f->value(x) - problem.f->value(xp);
  for (std::size_t i = 0; i < x.size(); ++i)
    p_oracle += (x[i] - xp[i]) * aty[i];

  const auto ax = problem.A->apply(xp);
  double d_oracle = 0.0;  // g* = 0 inside the box for both points
  for (std::size_t i = 0; i < y.size(); ++i)
    d_oracle -= ax[i] * (y[i] - yp[i]);

  CHECK(primal_gap(problem, xp, yp, x) ==
        doctest::Approx(p_oracle).epsilon(1e-12));
  CHECK(dual_gap(problem, xp, yp, y) ==
        doctest::Approx(d_oracle).epsilon(1e-12));
  CHECK(gap(problem, xp, yp, x, y) ==
        doctest::Approx(p_oracle + d_oracle).epsilon(1e-12));
}

TEST_CASE("ergodic accumulator single-term start") {
  ErgodicAccumulator acc(2, 2);
  const std::vector<double> x1{1.0, 2.0}, y2{3.0, 4.0};
  acc.update(1, 0.5, 0.0, x1, y2);
  CHECK(acc.weight_sum() == 0.5);
  CHECK(acc.primal_average() == x1);
  CHECK(acc.dual_average() == y2);
}

TEST_CASE("ergodic accumulator equals the direct weighted sums") {
  Rng rng(70);
  const std::size_t n = 3, m = 2, steps = 10000;
  ErgodicAccumulator acc(n, m);

  std::vector<std::vector<double>> xs, ys;
  std::vector<double> taus, thetas;
  double tau_prev = 0.3;
  double theta_prev = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    // a stream obeying tau_k <= tau_{k-1} sqrt(1 + theta_{k-1})
    const double cap = k == 1 ? 0.3 : tau_prev * std::sqrt(1.0 + theta_prev);
    const double tau = cap * rng.uniform(0.5, 1.0);
    const double theta = k == 1 ? 0.0 : tau / tau_prev;
    const auto x = ts::random_vec(n, rng);
    const auto y = ts::random_vec(m, rng);
    acc.update(static_cast<std::int64_t>(k), tau, theta, x, y);
    xs.push_back(x);
    ys.push_back(y);
    taus.push_back(tau);
    thetas.push_back(theta);
    tau_prev = tau;
    theta_prev = theta;
  }

  // direct recomputation from the stored trace
  double s = 0.0;
  for (double t : taus) s += t;
  std::vector<double> xbar(n, 0.0), ybar(m, 0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double weight =
        i + 1 < steps ? taus[i] * (1.0 + thetas[i]) - taus[i + 1] * thetas[i + 1]
                      : taus[i] * (1.0 + thetas[i]);
    CHECK(weight >= -1e-15);
    for (std::size_t j = 0; j < n; ++j) xbar[j] += weight * xs[i][j];
    for (std::size_t j = 0; j < m; ++j) ybar[j] += taus[i] * ys[i][j];
  }
  for (double& v : xbar) v /= s;
  for (double& v : ybar) v /= s;

  CHECK(ts::dist(acc.primal_average(), xbar) <= 1e-12 * (1.0 + ts::norm(xbar)));
  CHECK(ts::dist(acc.dual_average(), ybar) <= 1e-12 * (1.0 + ts::norm(ybar)));
  CHECK(acc.weight_sum() == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("ergodic accumulator flags violations") {
  ErgodicAccumulator acc(1, 1);
  const std::vector<double> x{1.0}, y{1.0};
  acc.update(1, 1.0, 0.0, x, y);
  // out of order
  CHECK_THROWS_AS(acc.update(3, 1.0, 0.5, x, y), std::logic_error);
  // tau_2 theta_2 = 4 > tau_1 (1 + theta_1) = 1
  CHECK_THROWS_AS(acc.update(2, 2.0, 2.0, x, y), std::logic_error);
}

TEST_CASE("rate certificate constants and the A = 0 reduction") {
  // A = 0, mu = L: s = t = 2 mu, q = mu/(8 mu) = 1/8; the r-term is
  // vacuous without coupling, so the contraction is 1 - 1/8
  const RateCertificate cert = make_rate_certificate(1.0, 1.0, 4.0, 0.0, 0.0);
  CHECK(cert.s == doctest::Approx(2.0));
  CHECK(cert.t == doctest::Approx(2.0));
  CHECK(cert.q == doctest::Approx(1.0 / 8.0));
  CHECK(cert.r == 0.0);
  CHECK(cert.contraction == doctest::Approx(1.0 - 1.0 / 8.0));

  const RateCertificate full = make_rate_certificate(0.5, 5.0, 1.0, 3.0, 1.2);
  CHECK(full.s == doctest::Approx(std::sqrt(4.0 * 25.0 + 9.0)));
  CHECK(full.t == doctest::Approx(std::sqrt(4.0 * 0.25 + 9.0)));
  CHECK(full.p == 0.5);
  CHECK(full.q == doctest::Approx(0.5 / (4.0 * full.s)));
  const double mixed = 8.0 * full.s * full.s * full.t + 4.0 * 25.0 * full.s;
  CHECK(full.r == doctest::Approx(1.0 * 1.44 * 0.5 / (1.0 * 1.44 * 0.5 + mixed)));
  CHECK(full.contraction > 0.0);
  CHECK(full.contraction < 1.0);
}

TEST_CASE("gap bound check and boundedness constant") {
  std::vector<std::pair<std::int64_t, double>> gaps;
  const double m_const = 2.0, smoothness = 5.0, beta = 1.0, c = 1e-15,
               norm_a = 3.0;
  const double rate = m_const * std::sqrt(smoothness * smoothness +
                                          (beta / (1.0 - c)) * norm_a * norm_a);
  gaps.push_back({1, rate * 0.9});
  gaps.push_back({10, rate / 10.0 * 0.5});
  auto report = gap_bound_check(gaps, m_const, smoothness, beta, c, norm_a);
  CHECK(report.ok);
  CHECK(report.worst_ratio == doctest::Approx(0.9));

  gaps.push_back({100, rate / 100.0 * 1.5});
  report = gap_bound_check(gaps, m_const, smoothness, beta, c, norm_a);
  CHECK_FALSE(report.ok);

  // radius 0 reduces M(B) to the plain boundedness constant
  const std::vector<double> x1{1.0, 0.0}, y1{2.0}, x0{0.0, 0.0};
  const std::vector<double> xs{0.0, 0.0}, ys{0.0};
  const double m0 = boundedness_constant(x1, y1, x0, xs, ys, 2.0, 0.0);
  CHECK(m0 == doctest::Approx(1.0 + 4.0 / 2.0 + 0.5));
  CHECK(boundedness_constant(x1, y1, x0, xs, ys, 2.0, 1.0) > m0);
}

TEST_CASE("linear rate check accepts a conforming stream and flags others") {
  const RateCertificate cert = make_rate_certificate(0.5, 5.0, 1.0, 3.0, 1.0);
  const double rho = cert.contraction;
  std::vector<std::pair<std::int64_t, double>> energies;
  const double m2 = 4.0;
  for (std::int64_t k = 2; k <= 400; ++k)
    energies.push_back({k, 0.5 * m2 * std::pow(rho * 0.95, k)});
  auto report = linear_rate_check(energies, cert, m2);
  CHECK(report.ok);
  CHECK(report.empirical_rate <= rho);
  CHECK(report.worst_margin >= 0.0);

  energies[5].second = 10.0 * m2;  // plant a violation
  report = linear_rate_check(energies, cert, m2);
  CHECK_FALSE(report.ok);
}

TEST_CASE("psnr fixtures") {
  Image a(4, 4, 0.0), b(4, 4, 0.1);
  CHECK(std::isinf(psnr(a, a, 1.0)));
  CHECK(psnr(a, b, 1.0) == doctest::Approx(20.0));
  Image c(4, 5, 0.0);
  CHECK_THROWS_AS(psnr(a, c, 1.0), std::invalid_argument);
}

TEST_CASE("ssim fixtures") {
  const Image img = make_blocky_image(16, 16, 4, 8);
  CHECK(ssim(img, img, 1.0) == doctest::Approx(1.0));

  // negated structure scores negative
  Image flipped = img;
  double mean = 0.0;
  for (double v : img.pixels) mean += v;
  mean /= static_cast<double>(img.pixels.size());
  for (std::size_t i = 0; i < flipped.pixels.size(); ++i)
    flipped.pixels[i] = 2.0 * mean - img.pixels[i];
  CHECK(ssim(img, flipped, 1.0) < 0.0);

  Image flat_a(9, 9, 0.4), flat_b(9, 9, 0.4);
  CHECK(ssim(flat_a, flat_b, 1.0) == doctest::Approx(1.0));

  Image tiny(4, 4, 0.0);
  CHECK_THROWS_AS(ssim(tiny, tiny, 1.0), std::invalid_argument);
}
