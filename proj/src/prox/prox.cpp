#include "apdakit/prox/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "apdakit/kernels/kernels.hpp"

namespace apdakit::prox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dual_len(const Regularizer& reg, std::size_t len,
                    const char* what) {
  if (reg.kind() == RegularizerKind::kGroupL21 &&
      len != 2 * reg.num_groups())
    throw std::invalid_argument(
        std::string(what) + ": group layout expects length " +
        std::to_string(2 * reg.num_groups()) + ", got " + std::to_string(len));
}

}  // namespace

Regularizer::Regularizer(RegularizerKind kind, double lambda,
                         std::size_t num_groups)
    : kind_(kind), lambda_(lambda), num_groups_(num_groups) {
  if (lambda < 0.0 || !std::isfinite(lambda))
    throw std::invalid_argument("Regularizer: lambda must be finite and >= 0");
}

Regularizer Regularizer::l1(double lambda) {
  return Regularizer(RegularizerKind::kL1, lambda, 0);
}

Regularizer Regularizer::group_l21(double lambda, std::size_t num_groups) {
  if (num_groups == 0)
    throw std::invalid_argument("Regularizer: num_groups must be positive");
  return Regularizer(RegularizerKind::kGroupL21, lambda, num_groups);
}

Regularizer Regularizer::zero() {
  return Regularizer(RegularizerKind::kZero, 0.0, 0);
}

double Regularizer::value(std::span<const double> z) const {
  check_dual_len(*this, z.size(), "Regularizer::value");
  switch (kind_) {
    case RegularizerKind::kL1:
      return lambda_ * kernels::l1_norm(z);
    case RegularizerKind::kGroupL21:
      return lambda_ * kernels::group_l21_norm(z.subspan(0, num_groups_),
                                               z.subspan(num_groups_));
    case RegularizerKind::kZero:
      return 0.0;
  }
  return 0.0;
}

double Regularizer::conjugate_value(std::span<const double> y,
                                    double feasibility_tol) const {
  check_dual_len(*this, y.size(), "Regularizer::conjugate_value");
  // absolute + relative slack; lambda = 0 still admits y = 0
  const double bound = lambda_ + feasibility_tol * std::max(1.0, lambda_);
  switch (kind_) {
    case RegularizerKind::kL1:
      return kernels::linf_norm(y) <= bound ? 0.0 : kInf;
    case RegularizerKind::kGroupL21: {
      const auto a = y.subspan(0, num_groups_);
      const auto b = y.subspan(num_groups_);
      for (std::size_t p = 0; p < num_groups_; ++p) {
        const double norm = std::sqrt(a[p] * a[p] + b[p] * b[p]);
        if (norm > bound) return kInf;
      }
      return 0.0;
    }
    case RegularizerKind::kZero: {
      const double norm = std::sqrt(kernels::nrm2_sq(y));
      return norm <= feasibility_tol ? 0.0 : kInf;
    }
  }
  return kInf;
}

void prox_g(const Regularizer& reg, double t, std::span<const double> z,
            std::span<double> out) {
  if (t <= 0.0) throw std::invalid_argument("prox_g: t must be positive");
  if (z.size() != out.size())
    throw std::invalid_argument("prox_g: output length mismatch");
  check_dual_len(reg, z.size(), "prox_g");
  switch (reg.kind()) {
    case RegularizerKind::kL1:
      kernels::soft_threshold(z, t * reg.lambda(), out);
      return;
    case RegularizerKind::kGroupL21: {
      const std::size_t n = reg.num_groups();
      kernels::group_shrink_pairs(z.subspan(0, n), z.subspan(n),
                                  t * reg.lambda(), out.subspan(0, n),
                                  out.subspan(n));
      return;
    }
    case RegularizerKind::kZero:
      std::copy(z.begin(), z.end(), out.begin());
      return;
  }
}

void prox_g_conj(const Regularizer& reg, double sigma,
                 std::span<const double> z, std::span<double> out) {
  if (sigma <= 0.0)
    throw std::invalid_argument("prox_g_conj: sigma must be positive");
  if (z.size() != out.size())
    throw std::invalid_argument("prox_g_conj: output length mismatch");
  check_dual_len(reg, z.size(), "prox_g_conj");
  switch (reg.kind()) {
    case RegularizerKind::kL1:
      kernels::clamp_abs(z, reg.lambda(), out);
      return;
    case RegularizerKind::kGroupL21: {
      const std::size_t n = reg.num_groups();
      kernels::group_project_pairs(z.subspan(0, n), z.subspan(n),
                                   reg.lambda(), out.subspan(0, n),
                                   out.subspan(n));
      return;
    }
    case RegularizerKind::kZero:
      // g* is the indicator of {0}
      std::fill(out.begin(), out.end(), 0.0);
      return;
  }
}

void prox_conj_via_moreau(const Regularizer& reg, double sigma,
                          std::span<const double> z, std::span<double> out) {
  if (sigma <= 0.0)
    throw std::invalid_argument("prox_conj_via_moreau: sigma must be positive");
  std::vector<double> scaled(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) scaled[i] = z[i] / sigma;
  std::vector<double> p(z.size());
  prox_g(reg, 1.0 / sigma, scaled, p);
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] - sigma * p[i];
}

std::vector<double> prox_g(const Regularizer& reg, double t,
                           std::span<const double> z) {
  std::vector<double> out(z.size());
  prox_g(reg, t, z, std::span<double>(out));
  return out;
}

std::vector<double> prox_g_conj(const Regularizer& reg, double sigma,
                                std::span<const double> z) {
  std::vector<double> out(z.size());
  prox_g_conj(reg, sigma, z, std::span<double>(out));
  return out;
}

std::vector<double> prox_conj_via_moreau(const Regularizer& reg, double sigma,
                                         std::span<const double> z) {
  std::vector<double> out(z.size());
  prox_conj_via_moreau(reg, sigma, z, std::span<double>(out));
  return out;
}

}  // namespace apdakit::prox
