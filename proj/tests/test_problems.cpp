#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "apdakit/common/rng.hpp"
#include "apdakit/diag/fd_check.hpp"
#include "apdakit/diag/gaps.hpp"
#include "apdakit/linop/norms.hpp"
#include "apdakit/problems/generators.hpp"
#include "support/test_oracles.hpp"

using namespace apdakit;
using namespace apdakit::problems;
namespace ts = testsupport;

namespace {

std::vector<ObjectivePtr> objective_zoo(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ObjectivePtr> out;
  const auto logistic = generate_synthetic_logistic(25, 8, rng.next_u64());
  out.push_back(std::make_shared<LogisticObjective>(logistic.features,
                                                    logistic.labels));
  const Image img = make_blocky_image(5, 6, 2, rng.next_u64());
  out.push_back(make_inpainting_problem(img, 0.5, 1e-2, rng.next_u64()).f);
  out.push_back(
      make_phase_retrieval_problem(img, 60, 0.4, 0.1, 0.5, rng.next_u64()).f);
  out.push_back(make_quadratic_testproblem(6, 2, 0.4, 3.0, rng.next_u64()).f);
  return out;
}

}  // namespace

TEST_CASE("logistic value fixtures") {
  const auto data = generate_synthetic_logistic(12, 5, 3);
  LogisticObjective f(data.features, data.labels);
  const std::vector<double> zero(5, 0.0);
  CHECK(f.value(zero) == doctest::Approx(12.0 * std::log(2.0)));

  // gradient at 0 is -Q^T b / 2
  std::vector<double> grad(5);
  f.gradient(zero, grad);
  const auto qtb = data.features->adjoint_apply(data.labels);
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(grad[i] == doctest::Approx(-0.5 * qtb[i]));
}

TEST_CASE("logistic stays finite for huge margins") {
  std::vector<std::size_t> row_ptr{0, 1, 2};
  std::vector<std::size_t> col_idx{0, 0};
  std::vector<double> values{1.0, -1.0};
  auto q = std::make_shared<linop::CsrOperator>(2, 1, row_ptr, col_idx, values);
  LogisticObjective f(q, std::vector<double>{1.0, -1.0});
  std::vector<double> grad(1);
  for (double scale : {1e2, 1e3, 1e4}) {
    const std::vector<double> x{scale};
    CHECK(std::isfinite(f.value(x)));
    const double v = f.value_and_gradient(x, grad);
    CHECK(std::isfinite(v));
    CHECK(std::isfinite(grad[0]));
  }
}

TEST_CASE("masked least squares vanishes on consistent data") {
  const Image img = make_blocky_image(4, 4, 2, 11);
  const auto problem = make_inpainting_problem(img, 0.5, 1e-2, 11);
  CHECK(problem.f->value(img.pixels) == 0.0);
  std::vector<double> grad(img.size());
  problem.f->gradient(img.pixels, grad);
  CHECK(ts::norm(grad) == 0.0);
}

TEST_CASE("phase retrieval vanishes at the ground truth without corruption") {
  const Image img = make_blocky_image(4, 4, 2, 13);
  const auto problem = make_phase_retrieval_problem(img, 50, 0.5, 0.0, 1.0, 13);
  CHECK(problem.f->value(img.pixels) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(problem.convexity == Convexity::kNonconvexHeuristic);
}

TEST_CASE("gradients match central finite differences") {
  Rng rng(17);
  for (const auto& obj : objective_zoo(99)) {
    for (int probe = 0; probe < 20; ++probe) {
      const auto x = ts::random_vec(obj->dim(), rng);
      CHECK(diag::gradient_check_error(*obj, x) <= 1e-5);
    }
  }
}

TEST_CASE("convexity probe on the convex kinds") {
  Rng rng(19);
  for (const auto& obj : objective_zoo(100)) {
    if (obj->kind() == ObjectiveKind::kPhaseRetrieval) continue;
    std::vector<double> grad(obj->dim());
    for (int probe = 0; probe < 50; ++probe) {
      const auto x = ts::random_vec(obj->dim(), rng);
      const auto y = ts::random_vec(obj->dim(), rng);
      const double fx = obj->value_and_gradient(x, grad);
      double linear = fx;
      for (std::size_t i = 0; i < x.size(); ++i)
        linear += grad[i] * (y[i] - x[i]);
      CHECK(obj->value(y) >= linear - 1e-10 * (1.0 + std::fabs(fx)));
    }
  }
}

TEST_CASE("make_logistic_problem lambda rule") {
  {
    std::vector<std::size_t> row_ptr{0, 1, 2};
    std::vector<std::size_t> col_idx{0, 1};
    std::vector<double> values{1.0, 1.0};
    auto q = std::make_shared<linop::CsrOperator>(2, 2, row_ptr, col_idx, values);
    const auto problem =
        make_logistic_problem(q, std::vector<double>{1.0, -1.0}, 0.005);
    CHECK(problem.reg.lambda() == doctest::Approx(0.005));
    CHECK(problem.A->kind() == linop::OperatorKind::kIdentity);
  }
  {
    // lambda equals lambda_frac * max |Q^T b| computed densely
    const auto data = generate_synthetic_logistic(50, 20, 23);
    const auto problem =
        make_logistic_problem(data.features, data.labels, 0.005);
    const auto dense = linop::materialize_dense(*data.features);
    double best = 0.0;
    for (std::size_t j = 0; j < 20; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < 50; ++i)
        v += dense[i * 20 + j] * data.labels[i];
      best = std::max(best, std::fabs(v));
    }
    CHECK(problem.reg.lambda() == doctest::Approx(0.005 * best).epsilon(1e-12));
  }
  {
    const auto data = generate_synthetic_logistic(10, 4, 29);
    CHECK_THROWS_WITH_AS(
        make_logistic_problem(data.features, data.labels, 0.0),
        doctest::Contains("lambda_frac must be positive"),
        std::invalid_argument);
  }
}

TEST_CASE("inpainting mask size and reproducibility") {
  const Image img = make_blocky_image(4, 4, 2, 31);
  const auto problem = make_inpainting_problem(img, 0.4, 1e-2, 77);
  // ceil(0.4 * 16) = 7 kept pixels
  CHECK(problem.f->kind() == ObjectiveKind::kMaskedLeastSquares);
  const auto& f =
      static_cast<const MaskedLeastSquaresObjective&>(*problem.f);
  CHECK(f.selection().out_dim() == 7);

  // identical seed gives the identical index set; different seed differs
  const auto again = make_inpainting_problem(img, 0.4, 1e-2, 77);
  const auto& f2 =
      static_cast<const MaskedLeastSquaresObjective&>(*again.f);
  const auto& m1 = static_cast<const linop::MaskOperator&>(f.selection());
  const auto& m2 = static_cast<const linop::MaskOperator&>(f2.selection());
  CHECK(m1.kept_indices() == m2.kept_indices());

  const auto other = make_inpainting_problem(img, 0.4, 1e-2, 78);
  const auto& f3 =
      static_cast<const MaskedLeastSquaresObjective&>(*other.f);
  const auto& m3 = static_cast<const linop::MaskOperator&>(f3.selection());
  CHECK(m1.kept_indices() != m3.kept_indices());
}

TEST_CASE("keep_ratio 1 keeps every pixel") {
  const Image img = make_blocky_image(3, 3, 3, 37);
  const auto problem = make_inpainting_problem(img, 1.0, 1e-2, 5);
  CHECK(problem.f->value(img.pixels) == 0.0);
  const auto& f =
      static_cast<const MaskedLeastSquaresObjective&>(*problem.f);
  CHECK(f.selection().out_dim() == 9);
}

TEST_CASE("generators are bit-deterministic given the seed") {
  const auto a = generate_synthetic_logistic(20, 6, 123);
  const auto b = generate_synthetic_logistic(20, 6, 123);
  CHECK(a.labels == b.labels);
  CHECK(a.features->values() == b.features->values());
  CHECK(a.features->col_idx() == b.features->col_idx());

  const Image img = make_blocky_image(6, 6, 2, 5);
  const auto p1 = make_phase_retrieval_problem(img, 30, 0.3, 0.1, 1.0, 9);
  const auto p2 = make_phase_retrieval_problem(img, 30, 0.3, 0.1, 1.0, 9);
  const auto& f1 = static_cast<const PhaseRetrievalObjective&>(*p1.f);
  const auto& f2 = static_cast<const PhaseRetrievalObjective&>(*p2.f);
  CHECK(f1.b() == f2.b());
  CHECK(f1.measurements().values() == f2.measurements().values());
}

TEST_CASE("phase retrieval corruption count") {
  const Image img = make_blocky_image(4, 4, 2, 41);
  const auto clean = make_phase_retrieval_problem(img, 40, 0.5, 0.0, 1.0, 3);
  const auto corrupt = make_phase_retrieval_problem(img, 40, 0.5, 0.1, 1.0, 3);
  const auto& fc = static_cast<const PhaseRetrievalObjective&>(*clean.f);
  const auto& fd = static_cast<const PhaseRetrievalObjective&>(*corrupt.f);
  std::size_t zeroed = 0;
  for (std::size_t i = 0; i < 40; ++i)
    if (fd.b()[i] == 0.0 && fc.b()[i] != 0.0) ++zeroed;
  CHECK(zeroed == 4);  // round(0.1 * 40)
}

TEST_CASE("quadratic testproblem spectrum and reference") {
  const auto problem = make_quadratic_testproblem(10, 4, 0.5, 5.0, 2024);
  const auto& quad = static_cast<const QuadraticObjective&>(*problem.f);
  CHECK(quad.mu() == 0.5);
  CHECK(quad.smoothness() == 5.0);

  // exact spectrum bounds via the eigen oracle
  Eigen::MatrixXd h(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) h(i, j) = quad.hessian()[i * 10 + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  CHECK(eig.eigenvalues().minCoeff() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(eig.eigenvalues().maxCoeff() == doctest::Approx(5.0).epsilon(1e-10));

  // coupling has full row rank
  CHECK(linop::smallest_singular_value(*problem.A) > 0.0);
  CHECK(linop::smallest_singular_value(*problem.A) ==
        doctest::Approx(ts::sigma_min_oracle(*problem.A)).epsilon(1e-10));

  // stored reference satisfies the optimality residual gate
  REQUIRE(problem.reference.has_value());
  const auto residuals =
      diag::saddle_residuals(problem, problem.reference->x,
                             problem.reference->y, 1.0);
  CHECK(residuals.combined() <= 1e-10);
}

TEST_CASE("quadratic testproblem with mu = L is exactly the scaled identity") {
  const auto problem = make_quadratic_testproblem(6, 2, 1.0, 1.0, 77);
  const auto& quad = static_cast<const QuadraticObjective&>(*problem.f);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      CHECK(quad.hessian()[i * 6 + j] == (i == j ? 1.0 : 0.0));
}

TEST_CASE("quadratic testproblem precondition checks") {
  CHECK_THROWS_AS(make_quadratic_testproblem(4, 6, 0.5, 5.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic_testproblem(4, 2, 2.0, 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("degenerate inpainting inputs are rejected") {
  const Image img = make_blocky_image(4, 4, 2, 1);
  CHECK_THROWS_AS(make_inpainting_problem(img, 0.0, 1e-2, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_inpainting_problem(img, 1.5, 1e-2, 1),
                  std::invalid_argument);
}
