#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "apdakit/common/rng.hpp"
#include "apdakit/linop/linop.hpp"
#include "apdakit/linop/norms.hpp"
#include "support/test_oracles.hpp"

using namespace apdakit;
using namespace apdakit::linop;
namespace ts = testsupport;

namespace {

std::vector<OperatorPtr> operator_zoo(Rng& rng) {
  std::vector<OperatorPtr> ops;
  std::vector<double> dense(6 * 4);
  for (double& v : dense) v = rng.normal();
  ops.push_back(std::make_shared<DenseOperator>(6, 4, dense));

  std::vector<std::size_t> row_ptr{0, 2, 3, 3, 6};
  std::vector<std::size_t> col_idx{0, 3, 1, 0, 2, 4};
  std::vector<double> values{1.5, -2.0, 0.5, 3.0, -1.0, 2.5};
  ops.push_back(std::make_shared<CsrOperator>(4, 5, row_ptr, col_idx, values));

  ops.push_back(std::make_shared<IdentityOperator>(7));
  ops.push_back(std::make_shared<ZeroOperator>(3, 5));
  ops.push_back(
      std::make_shared<MaskOperator>(8, std::vector<std::size_t>{1, 4, 6}));
  ops.push_back(std::make_shared<GradientOperator2D>(5, 4));
  ops.push_back(std::make_shared<CompositionOperator>(
      std::make_shared<MaskOperator>(40, std::vector<std::size_t>{0, 9, 17, 33}),
      std::make_shared<GradientOperator2D>(4, 5)));
  return ops;
}

}  // namespace

TEST_CASE("identity and mask apply semantics") {
  IdentityOperator eye(3);
  CHECK(eye.apply(std::vector<double>{1.0, -2.0, 0.0}) ==
        std::vector<double>{1.0, -2.0, 0.0});

  MaskOperator mask(3, {0, 2});
  CHECK(mask.apply(std::vector<double>{5.0, 7.0, 9.0}) ==
        std::vector<double>{5.0, 9.0});
  CHECK(mask.adjoint_apply(std::vector<double>{5.0, 9.0}) ==
        std::vector<double>{5.0, 0.0, 9.0});
}

TEST_CASE("dense adjoint is the transpose") {
  DenseOperator a(2, 2, {1.0, 2.0, 3.0, 4.0});
  CHECK(a.adjoint_apply(std::vector<double>{1.0, 1.0}) ==
        std::vector<double>{4.0, 6.0});
}

TEST_CASE("discrete gradient forward differences with Neumann boundary") {
  GradientOperator2D grad(2, 2);
  const std::vector<double> image{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> out = grad.apply(image);
  // horizontal diffs then vertical diffs, row-major
  CHECK(out == std::vector<double>{1.0, 0.0, 1.0, 0.0, 2.0, 2.0, 0.0, 0.0});
}

TEST_CASE("discrete gradient annihilates constant images") {
  GradientOperator2D grad(6, 9);
  const std::vector<double> flat(6 * 9, 3.7);
  for (double v : grad.apply(flat)) CHECK(v == 0.0);
}

TEST_CASE("dimension mismatches report both dimensions") {
  IdentityOperator eye(3);
  std::vector<double> wrong(4);
  CHECK_THROWS_WITH_AS(eye.apply(wrong), doctest::Contains("dimension mismatch"),
                       std::invalid_argument);
}

TEST_CASE("adjoint consistency over random probes") {
  Rng rng(42);
  for (const auto& op : operator_zoo(rng)) {
    for (int probe = 0; probe < 100; ++probe) {
      const auto x = ts::random_vec(op->in_dim(), rng);
      const auto y = ts::random_vec(op->out_dim(), rng);
      const auto ax = op->apply(x);
      const auto aty = op->adjoint_apply(y);
      const double lhs = ts::dot(ax, y);
      const double rhs = ts::dot(x, aty);
      CHECK(std::fabs(lhs - rhs) <=
            1e-10 * (1.0 + ts::norm(ax) * ts::norm(y)));
    }
  }
}

TEST_CASE("norm certificates dominate random probes") {
  Rng rng(43);
  for (const auto& op : operator_zoo(rng)) {
    const double bound = operator_norm(*op);
    for (int probe = 0; probe < 100; ++probe) {
      const auto x = ts::random_vec(op->in_dim(), rng);
      CHECK(ts::norm(op->apply(x)) <= bound * ts::norm(x) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("composition applies factors in sequence") {
  Rng rng(44);
  auto inner = std::make_shared<GradientOperator2D>(3, 4);
  auto outer = std::make_shared<MaskOperator>(
      24, std::vector<std::size_t>{0, 5, 11, 23});
  CompositionOperator comp(outer, inner);
  for (int probe = 0; probe < 20; ++probe) {
    const auto x = ts::random_vec(comp.in_dim(), rng);
    const auto direct = comp.apply(x);
    const auto staged = outer->apply(inner->apply(x));
    CHECK(ts::dist(direct, staged) <= 1e-12);
  }
}

TEST_CASE("operator_norm exact kinds and power iteration") {
  CHECK(operator_norm(IdentityOperator(100)) == 1.0);
  CHECK(operator_norm(ZeroOperator(4, 4)) == 0.0);

  DenseOperator diag(2, 2, {3.0, 0.0, 0.0, 1.0});
  const auto result = power_iteration_norm(diag, 1e-10, 20000, 7);
  CHECK(result.converged);
  CHECK(result.estimate == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(operator_norm(diag) >= result.estimate);

  // discrete gradient: sqrt(8) certifies the true norm from above
  GradientOperator2D grad(8, 8);
  CHECK(operator_norm(grad) == doctest::Approx(std::sqrt(8.0)));
  CHECK(ts::svd_norm_oracle(grad) <= std::sqrt(8.0));
}

TEST_CASE("power iteration tracks the SVD oracle on random operators") {
  Rng rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> data(7 * 5);
    for (double& v : data) v = rng.normal();
    DenseOperator op(7, 5, data);
    const double oracle = ts::svd_norm_oracle(op);
    const auto estimate = power_iteration_norm(op, 1e-12, 50000, trial);
    CHECK(estimate.estimate == doctest::Approx(oracle).epsilon(1e-7));
    CHECK(operator_norm(op, 1e-12, 50000, trial) >= oracle * (1.0 - 1e-9));
  }
}

TEST_CASE("smallest singular value against the eigen oracle") {
  CHECK(smallest_singular_value(IdentityOperator(4)) == doctest::Approx(1.0));
  CHECK(smallest_singular_value(DenseOperator(2, 2, {3.0, 0.0, 0.0, 1.0})) ==
        doctest::Approx(1.0));

  Rng rng(46);
  std::vector<double> data(3 * 5);
  for (double& v : data) v = rng.normal();
  DenseOperator wide(3, 5, data);
  CHECK(smallest_singular_value(wide) ==
        doctest::Approx(ts::sigma_min_oracle(wide)).epsilon(1e-10));
}

TEST_CASE("smallest singular value refuses operators above the size cap") {
  GradientOperator2D grad(64, 64);  // 8192 x 4096 materialization
  CHECK_THROWS_WITH_AS(smallest_singular_value(grad, 1000),
                       doctest::Contains("certificate unavailable"),
                       std::runtime_error);
}

TEST_CASE("gradient operator norm hint is sqrt(8)") {
  GradientOperator2D grad(10, 10);
  CHECK(*grad.norm_hint() == doctest::Approx(std::sqrt(8.0)));
  CHECK(ts::svd_norm_oracle(grad) <= std::sqrt(8.0) + 1e-12);
}

TEST_CASE("csr and dense built from the same entries agree") {
  Rng rng(47);
  const std::size_t rows = 9, cols = 6;
  std::vector<double> dense(rows * cols, 0.0);
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (rng.uniform() < 0.4) {
        const double v = rng.normal();
        dense[r * cols + c] = v;
        col_idx.push_back(c);
        values.push_back(v);
      }
    }
    row_ptr.push_back(values.size());
  }
  const CsrOperator sparse(rows, cols, row_ptr, col_idx, values);
  const DenseOperator full(rows, cols, dense);
  for (int probe = 0; probe < 30; ++probe) {
    const auto x = ts::random_vec(cols, rng);
    CHECK(ts::dist(sparse.apply(x), full.apply(x)) <= 1e-12);
    const auto y = ts::random_vec(rows, rng);
    CHECK(ts::dist(sparse.adjoint_apply(y), full.adjoint_apply(y)) <= 1e-12);
  }
}

TEST_CASE("power iteration reports non-finite operator data") {
  DenseOperator bad(2, 2,
                    {1.0, std::numeric_limits<double>::infinity(), 0.0, 1.0});
  CHECK_THROWS_WITH_AS(power_iteration_norm(bad, 1e-10, 100, 1),
                       doctest::Contains("non-finite"), std::runtime_error);
}

TEST_CASE("mask operator rejects bad index lists") {
  CHECK_THROWS_AS(MaskOperator(4, {2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(MaskOperator(4, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(MaskOperator(4, {5}), std::invalid_argument);
}
