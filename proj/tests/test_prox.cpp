#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "apdakit/common/rng.hpp"
#include "apdakit/linop/linop.hpp"
#include "apdakit/prox/prox.hpp"
#include "support/test_oracles.hpp"

using namespace apdakit;
using namespace apdakit::prox;
namespace ts = testsupport;

TEST_CASE("prox_g closed forms") {
  const Regularizer l1 = Regularizer::l1(1.0);
  CHECK(prox_g(l1, 1.0, std::vector<double>{3.0, -0.5, 1.0}) ==
        std::vector<double>{2.0, 0.0, 0.0});

  const Regularizer none = Regularizer::zero();
  CHECK(prox_g(none, 2.5, std::vector<double>{4.0, 4.0}) ==
        std::vector<double>{4.0, 4.0});

  const Regularizer group = Regularizer::group_l21(1.0, 1);
  const auto out = prox_g(group, 1.0, std::vector<double>{3.0, 4.0});
  CHECK(out[0] == doctest::Approx(2.4));
  CHECK(out[1] == doctest::Approx(3.2));
}

TEST_CASE("prox_g_conj closed forms") {
  const Regularizer l1 = Regularizer::l1(1.0);
  CHECK(prox_g_conj(l1, 1.0, std::vector<double>{3.0, -0.5}) ==
        std::vector<double>{1.0, -0.5});

  const Regularizer group = Regularizer::group_l21(1.0, 1);
  const auto out = prox_g_conj(group, 0.7, std::vector<double>{3.0, 4.0});
  CHECK(out[0] == doctest::Approx(0.6));
  CHECK(out[1] == doctest::Approx(0.8));

  const Regularizer none = Regularizer::zero();
  CHECK(prox_g_conj(none, 2.0, std::vector<double>{7.0, -7.0}) ==
        std::vector<double>{0.0, 0.0});
}

TEST_CASE("moreau identity fixtures") {
  const Regularizer l1 = Regularizer::l1(1.0);
  CHECK(prox_conj_via_moreau(l1, 1.0, std::vector<double>{3.0})[0] ==
        doctest::Approx(1.0));

  const Regularizer l1_wide = Regularizer::l1(2.0);
  CHECK(prox_conj_via_moreau(l1_wide, 0.5, std::vector<double>{-5.0})[0] ==
        doctest::Approx(-2.0));

  const Regularizer none = Regularizer::zero();
  CHECK(prox_conj_via_moreau(none, 3.0, std::vector<double>{6.0})[0] ==
        doctest::Approx(0.0));
}

TEST_CASE("moreau consistency on random inputs") {
  Rng rng(7);
  const std::vector<Regularizer> regs = {
      Regularizer::l1(0.8),
      Regularizer::group_l21(1.4, 5),
      Regularizer::zero(),
  };
  for (const Regularizer& reg : regs) {
    const std::size_t dim =
        reg.kind() == RegularizerKind::kGroupL21 ? 10 : 6;
    for (int trial = 0; trial < 1000; ++trial) {
      const double sigma = std::pow(10.0, rng.uniform(-3.0, 3.0));
      const auto z = ts::random_vec(dim, rng, 4.0);
      const auto direct = prox_g_conj(reg, sigma, z);
      const auto indirect = prox_conj_via_moreau(reg, sigma, z);
      CHECK(ts::dist(direct, indirect) <= 1e-10 * (1.0 + ts::norm(z)));
    }
  }
}

TEST_CASE("prox characterization: prox_g minimizes the proximal objective") {
  Rng rng(8);
  const std::vector<Regularizer> regs = {
      Regularizer::l1(1.1),
      Regularizer::group_l21(0.6, 4),
      Regularizer::zero(),
  };
  for (const Regularizer& reg : regs) {
    const std::size_t dim = reg.kind() == RegularizerKind::kGroupL21 ? 8 : 5;
    for (int trial = 0; trial < 10; ++trial) {
      const double t = std::pow(10.0, rng.uniform(-2.0, 2.0));
      const auto z = ts::random_vec(dim, rng, 3.0);
      const auto u = prox_g(reg, t, z);
      const double at_u =
          reg.value(u) + 0.5 * ts::dist(z, u) * ts::dist(z, u) / t;
      for (int probe = 0; probe < 100; ++probe) {
        auto w = ts::random_vec(dim, rng, 3.0);
        const double at_w =
            reg.value(w) + 0.5 * ts::dist(z, w) * ts::dist(z, w) / t;
        CHECK(at_u <= at_w + 1e-10);
      }
    }
  }
}

TEST_CASE("prox maps are non-expansive") {
  Rng rng(9);
  const std::vector<Regularizer> regs = {
      Regularizer::l1(1.0),
      Regularizer::group_l21(0.9, 6),
      Regularizer::zero(),
  };
  for (const Regularizer& reg : regs) {
    const std::size_t dim = reg.kind() == RegularizerKind::kGroupL21 ? 12 : 7;
    for (int trial = 0; trial < 200; ++trial) {
      const double t = std::pow(10.0, rng.uniform(-1.0, 1.0));
      const auto z1 = ts::random_vec(dim, rng, 3.0);
      const auto z2 = ts::random_vec(dim, rng, 3.0);
      CHECK(ts::dist(prox_g(reg, t, z1), prox_g(reg, t, z2)) <=
            ts::dist(z1, z2) * (1.0 + 1e-12));
      CHECK(ts::dist(prox_g_conj(reg, t, z1), prox_g_conj(reg, t, z2)) <=
            ts::dist(z1, z2) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("conjugate prox output stays in the dual domain") {
  Rng rng(10);
  const double lambda = 0.75;
  const Regularizer l1 = Regularizer::l1(lambda);
  const Regularizer group = Regularizer::group_l21(lambda, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const double sigma = std::pow(10.0, rng.uniform(-2.0, 2.0));
    const auto z1 = ts::random_vec(9, rng, 5.0);
    const auto out1 = prox_g_conj(l1, sigma, z1);
    for (double v : out1) CHECK(std::fabs(v) <= lambda * (1.0 + 1e-12));

    const auto z2 = ts::random_vec(16, rng, 5.0);
    const auto out2 = prox_g_conj(group, sigma, z2);
    for (std::size_t p = 0; p < 8; ++p)
      CHECK(std::hypot(out2[p], out2[p + 8]) <= lambda * (1.0 + 1e-12));
  }
}

TEST_CASE("group prox zero-norm group maps to zero") {
  const Regularizer group = Regularizer::group_l21(1.0, 2);
  const std::vector<double> z{0.0, 5.0, 0.0, 0.0};  // group 0 = (0, 0)
  const auto shrunk = prox_g(group, 1.0, z);
  CHECK(shrunk[0] == 0.0);
  CHECK(shrunk[2] == 0.0);
  const auto projected = prox_g_conj(group, 1.0, z);
  CHECK(projected[0] == 0.0);
  CHECK(projected[2] == 0.0);
}

TEST_CASE("isotropic TV of a known image through gradient + group norm") {
  // D[[1,2],[3,4]] stacks to [1,0,1,0 | 2,2,0,0]; pixel pairs are
  // (1,2), (0,2), (1,0), (0,0) with norms sqrt(5), 2, 1, 0
  apdakit::linop::GradientOperator2D grad(2, 2);
  const std::vector<double> image{1.0, 2.0, 3.0, 4.0};
  const Regularizer tv = Regularizer::group_l21(1.0, 4);
  CHECK(tv.value(grad.apply(image)) ==
        doctest::Approx(std::sqrt(5.0) + 3.0).epsilon(1e-14));
}

TEST_CASE("conjugate indicator values") {
  const Regularizer l1 = Regularizer::l1(1.0);
  CHECK(l1.conjugate_value(std::vector<double>{0.5, -1.0}) == 0.0);
  CHECK(std::isinf(l1.conjugate_value(std::vector<double>{1.5, 0.0})));

  const Regularizer none = Regularizer::zero();
  CHECK(none.conjugate_value(std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(std::isinf(none.conjugate_value(std::vector<double>{0.1, 0.0})));
}

TEST_CASE("regularizer construction guards") {
  CHECK_THROWS_AS(Regularizer::l1(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(Regularizer::group_l21(1.0, 0), std::invalid_argument);
  const Regularizer group = Regularizer::group_l21(1.0, 3);
  std::vector<double> bad(5);
  CHECK_THROWS_AS((void)group.value(bad), std::invalid_argument);
}
