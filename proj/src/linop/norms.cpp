#include "apdakit/linop/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include "apdakit/common/rng.hpp"
#include "apdakit/kernels/kernels.hpp"

namespace apdakit::linop {

PowerIterationResult power_iteration_norm(const LinearOperator& op,
                                          double tol, int max_iters,
                                          std::uint64_t seed) {
  if (tol <= 0.0) throw std::invalid_argument("power iteration: tol must be positive");
  if (max_iters <= 0) throw std::invalid_argument("power iteration: max_iters must be positive");

  Rng rng(seed);
  std::vector<double> v(op.in_dim());
  for (double& vi : v) vi = rng.normal();
  const double n0 = std::sqrt(kernels::nrm2_sq(v));
  if (n0 == 0.0) v[0] = 1.0;
  else
    for (double& vi : v) vi /= n0;

  std::vector<double> w(op.out_dim());
  PowerIterationResult res;
  double lambda_prev = -1.0;
  int small_changes = 0;
  for (int it = 1; it <= max_iters; ++it) {
    op.apply(v, w);
    const double lambda = kernels::nrm2_sq(w);  // ||Av||^2 with ||v|| = 1
    if (!std::isfinite(lambda))
      throw std::runtime_error("power iteration: non-finite value encountered");
    res.iterations = it;
    res.estimate = std::sqrt(lambda);
    if (lambda == 0.0) {
      // random vector landed in (or A maps everything near) the null space
      res.converged = true;
      return res;
    }
    if (lambda_prev >= 0.0 &&
        std::fabs(lambda - lambda_prev) <= tol * std::fabs(lambda)) {
      if (++small_changes >= 2) {
        res.converged = true;
        return res;
      }
    } else {
      small_changes = 0;
    }
    lambda_prev = lambda;
    op.adjoint_apply(w, v);
    const double nv = std::sqrt(kernels::nrm2_sq(v));
    if (!std::isfinite(nv))
      throw std::runtime_error("power iteration: non-finite value encountered");
    if (nv == 0.0) {
      res.converged = true;
      return res;
    }
    for (double& vi : v) vi /= nv;
  }
  return res;
}

double operator_norm(const LinearOperator& op, double tol, int max_iters,
                     std::uint64_t seed, double inflation) {
  switch (op.kind()) {
    case OperatorKind::kIdentity:
    case OperatorKind::kZero:
    case OperatorKind::kMask:
    case OperatorKind::kDiscreteGradient:
      return *op.norm_hint();
    default:
      break;
  }
  if (auto hint = op.norm_hint()) return *hint;
  const PowerIterationResult res = power_iteration_norm(op, tol, max_iters, seed);
  const double factor = inflation > 0.0 ? inflation : 1.0 + 10.0 * tol;
  return res.estimate * factor;
}

std::vector<double> jacobi_eigenvalues(std::vector<double> sym,
                                       std::size_t n) {
  if (sym.size() != n * n)
    throw std::invalid_argument("jacobi_eigenvalues: size mismatch");
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return sym[i * n + j];
  };

  double frob = 0.0;
  for (double v : sym) frob += v * v;
  frob = std::sqrt(frob);
  const double stop = 1e-15 * (frob > 0.0 ? frob : 1.0);

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (std::sqrt(2.0 * off) <= stop) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::fabs(apq) <= stop / (static_cast<double>(n) + 1.0)) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(
            1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0)), theta);
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double smallest_singular_value(const LinearOperator& op,
                               std::size_t entry_cap) {
  const std::size_t m = op.out_dim();
  const std::size_t n = op.in_dim();
  if (m * n > entry_cap)
    throw std::runtime_error(
        "smallest_singular_value: certificate unavailable at this scale (" +
        std::to_string(m) + "x" + std::to_string(n) + " exceeds cap of " +
        std::to_string(entry_cap) + " entries)");

  const std::vector<double> dense = materialize_dense(op);
  // Gram matrix A A^T, m x m
  std::vector<double> gram(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::span<const double> ri(dense.data() + i * n, n);
    for (std::size_t j = i; j < m; ++j) {
      const std::span<const double> rj(dense.data() + j * n, n);
      const double v = kernels::dot(ri, rj);
      gram[i * m + j] = v;
      gram[j * m + i] = v;
    }
  }
  const std::vector<double> eig = jacobi_eigenvalues(std::move(gram), m);
  return std::sqrt(std::max(eig.front(), 0.0));
}

}  // namespace apdakit::linop
