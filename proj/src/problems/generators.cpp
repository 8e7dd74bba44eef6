#include "apdakit/problems/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "apdakit/common/rng.hpp"
#include "apdakit/kernels/kernels.hpp"
#include "apdakit/linop/norms.hpp"
#include "apdakit/solvers/baselines.hpp"

namespace apdakit::problems {

namespace {

// first `count` entries of a seeded partial Fisher-Yates shuffle,
// returned sorted
std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                    std::size_t count,
                                                    Rng& rng) {
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(population - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<double> random_orthogonal(std::size_t n, Rng& rng) {
  // QR of a Gaussian matrix by modified Gram-Schmidt, columns = Q
  std::vector<double> q(n * n);
  for (double& v : q) v = rng.normal();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t prev = 0; prev < j; ++prev) {
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += q[i * n + prev] * q[i * n + j];
      for (std::size_t i = 0; i < n; ++i) q[i * n + j] -= proj * q[i * n + prev];
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += q[i * n + j] * q[i * n + j];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw std::runtime_error("random_orthogonal: degenerate draw");
    for (std::size_t i = 0; i < n; ++i) q[i * n + j] /= norm;
  }
  return q;
}

}  // namespace

std::shared_ptr<const linop::CsrOperator> make_sparse_gaussian(
    std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
  if (density <= 0.0 || density > 1.0)
    throw std::invalid_argument("make_sparse_gaussian: density must be in (0, 1]");
  Rng rng(seed);
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  row_ptr.reserve(rows + 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (density >= 1.0 || rng.uniform() < density) {
        col_idx.push_back(c);
        values.push_back(rng.normal());
      }
    }
    row_ptr.push_back(values.size());
  }
  return std::make_shared<linop::CsrOperator>(rows, cols, std::move(row_ptr),
                                              std::move(col_idx),
                                              std::move(values));
}

LogisticData generate_synthetic_logistic(std::size_t num_samples,
                                         std::size_t dim,
                                         std::uint64_t seed) {
  if (num_samples == 0 || dim == 0)
    throw std::invalid_argument("generate_synthetic_logistic: empty shape");
  Rng rng(seed);
  auto features = make_sparse_gaussian(num_samples, dim, 1.0, rng.next_u64());

  std::vector<double> truth(dim, 0.0);
  const std::size_t support = (dim + 3) / 4;
  for (std::size_t i = 0; i < support; ++i)
    truth[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;

  std::vector<double> margins = features->apply(truth);
  std::vector<double> labels(num_samples);
  for (std::size_t i = 0; i < num_samples; ++i) {
    const double noisy = margins[i] + 0.3 * rng.normal();
    labels[i] = noisy >= 0.0 ? 1.0 : -1.0;
  }
  return {std::move(features), std::move(labels)};
}

SaddleProblem make_logistic_problem(
    std::shared_ptr<const linop::CsrOperator> features,
    std::vector<double> labels, double lambda_frac) {
  if (!(lambda_frac > 0.0))
    throw std::invalid_argument("make_logistic_problem: lambda_frac must be positive");
  if (!features || features->out_dim() == 0)
    throw std::invalid_argument("make_logistic_problem: empty data");

  const std::vector<double> qtb = features->adjoint_apply(labels);
  const double lambda = lambda_frac * kernels::linf_norm(qtb);

  SaddleProblem problem;
  problem.A = std::make_shared<linop::IdentityOperator>(features->in_dim());
  problem.reg = prox::Regularizer::l1(lambda);
  problem.f = std::make_shared<LogisticObjective>(std::move(features),
                                                  std::move(labels));
  problem.convexity = Convexity::kConvex;
  problem.validate();
  return problem;
}

SaddleProblem make_inpainting_problem(const Image& image, double keep_ratio,
                                      double lambda, std::uint64_t seed) {
  image.require_consistent();
  if (!(keep_ratio > 0.0) || keep_ratio > 1.0)
    throw std::invalid_argument("make_inpainting_problem: keep_ratio must be in (0, 1]");
  for (double p : image.pixels)
    if (!std::isfinite(p))
      throw std::invalid_argument("make_inpainting_problem: non-finite pixel");

  const std::size_t total = image.size();
  const std::size_t kept = static_cast<std::size_t>(
      std::ceil(keep_ratio * static_cast<double>(total)));
  if (kept == 0)
    throw std::invalid_argument("make_inpainting_problem: degenerate mask (0 kept pixels)");

  Rng rng(seed);
  auto indices = sample_without_replacement(total, kept, rng);
  auto mask = std::make_shared<linop::MaskOperator>(total, indices);

  std::vector<double> b(kept);
  for (std::size_t t = 0; t < kept; ++t) b[t] = image.pixels[indices[t]];

  SaddleProblem problem;
  problem.A = std::make_shared<linop::GradientOperator2D>(image.height,
                                                          image.width);
  problem.reg = prox::Regularizer::group_l21(lambda, total);
  problem.f =
      std::make_shared<MaskedLeastSquaresObjective>(std::move(mask), std::move(b));
  problem.convexity = Convexity::kConvex;
  problem.validate();
  return problem;
}

SaddleProblem make_phase_retrieval_problem(const Image& image,
                                           std::size_t num_measurements,
                                           double density,
                                           double corrupt_frac, double lambda,
                                           std::uint64_t seed) {
  image.require_consistent();
  if (num_measurements == 0)
    throw std::invalid_argument("make_phase_retrieval_problem: m must be positive");
  if (corrupt_frac < 0.0 || corrupt_frac >= 1.0)
    throw std::invalid_argument("make_phase_retrieval_problem: corrupt_frac must be in [0, 1)");

  Rng rng(seed);
  auto stack = make_sparse_gaussian(num_measurements, image.size(), density,
                                    rng.next_u64());

  std::vector<double> b = stack->apply(image.pixels);
  for (double& v : b) v = v * v;

  const std::size_t corrupted = static_cast<std::size_t>(
      std::llround(corrupt_frac * static_cast<double>(num_measurements)));
  if (corrupted > 0) {
    const auto hits = sample_without_replacement(num_measurements, corrupted, rng);
    for (std::size_t i : hits) b[i] = 0.0;
  }

  SaddleProblem problem;
  problem.A = std::make_shared<linop::GradientOperator2D>(image.height,
                                                          image.width);
  problem.reg = prox::Regularizer::group_l21(lambda, image.size());
  problem.f =
      std::make_shared<PhaseRetrievalObjective>(std::move(stack), std::move(b));
  problem.convexity = Convexity::kNonconvexHeuristic;
  problem.validate();
  return problem;
}

SaddleProblem make_quadratic_testproblem(std::size_t dim_x, std::size_t dim_y,
                                         double mu, double smoothness,
                                         std::uint64_t seed,
                                         std::int64_t reference_max_iters,
                                         double reference_residual_gate) {
  if (!(mu > 0.0) || mu > smoothness)
    throw std::invalid_argument("make_quadratic_testproblem: need 0 < mu <= L");
  if (dim_y > dim_x)
    throw std::invalid_argument(
        "make_quadratic_testproblem: dim_y must not exceed dim_x (full row rank)");

  Rng rng(seed);

  // H = U diag(eigs) U^T with eigs spanning [mu, L] exactly; the
  // degenerate mu = L case is the scaled identity, kept exact
  std::vector<double> h(dim_x * dim_x, 0.0);
  if (mu == smoothness || dim_x == 1) {
    for (std::size_t i = 0; i < dim_x; ++i) h[i * dim_x + i] = smoothness;
  } else {
    std::vector<double> eigs(dim_x);
    for (std::size_t i = 0; i < dim_x; ++i)
      eigs[i] = mu + (smoothness - mu) * static_cast<double>(i) /
                         static_cast<double>(dim_x - 1);
    const std::vector<double> u = random_orthogonal(dim_x, rng);
    for (std::size_t i = 0; i < dim_x; ++i)
      for (std::size_t j = i; j < dim_x; ++j) {
        double v = 0.0;
        for (std::size_t k = 0; k < dim_x; ++k)
          v += u[i * dim_x + k] * eigs[k] * u[j * dim_x + k];
        h[i * dim_x + j] = v;
        h[j * dim_x + i] = v;
      }
  }

  std::vector<double> linear(dim_x);
  for (double& v : linear) v = rng.normal();

  std::vector<double> a_data(dim_y * dim_x);
  for (double& v : a_data) v = rng.normal();

  auto quad = std::make_shared<QuadraticObjective>(dim_x, std::move(h),
                                                   std::move(linear));
  quad->set_spectrum_bounds(mu, smoothness);

  SaddleProblem problem;
  problem.f = quad;
  problem.A = std::make_shared<linop::DenseOperator>(dim_y, dim_x,
                                                     std::move(a_data));
  problem.reg = prox::Regularizer::l1(0.05);
  problem.convexity = Convexity::kConvex;
  problem.validate();

  // reference saddle point from a long fixed-stepsize run; stepsizes meet
  // the validity gate with equality
  const double norm_a = linop::operator_norm(*problem.A);
  solvers::CvaConfig ref;
  ref.lipschitz_global = smoothness;
  ref.norm_A = norm_a;
  ref.tau = 1.0 / (norm_a + smoothness);
  ref.sigma = 1.0 / norm_a;
  ref.max_iters = reference_max_iters;
  ref.residual_tol = reference_residual_gate * 0.1;

  const std::vector<double> x0(dim_x, 0.0);
  const std::vector<double> y0(dim_y, 0.0);
  const solvers::RunResult run = solvers::cva_run(problem, x0, y0, ref);
  const double residual = std::hypot(run.summary.final_primal_residual,
                                     run.summary.final_dual_residual);
  if (!(residual <= reference_residual_gate))
    throw std::runtime_error(
        "make_quadratic_testproblem: reference run missed the residual gate (" +
        std::to_string(residual) + " > " +
        std::to_string(reference_residual_gate) + ")");

  ReferenceSolution sol;
  sol.x = run.x;
  sol.y = run.y;
  sol.objective = problem.full_objective(run.x);
  sol.protocol = "cva long run: tau=" + std::to_string(ref.tau) +
                 " sigma=" + std::to_string(ref.sigma) +
                 " iters=" + std::to_string(run.summary.iterations) +
                 " residual=" + std::to_string(residual) + " (gate " +
                 std::to_string(reference_residual_gate) + ")";
  problem.reference = std::move(sol);
  return problem;
}

Image make_blocky_image(std::size_t height, std::size_t width,
                        std::size_t blocks_per_side, std::uint64_t seed) {
  if (height == 0 || width == 0 || blocks_per_side == 0)
    throw std::invalid_argument("make_blocky_image: empty shape");
  Rng rng(seed);
  std::vector<double> levels(blocks_per_side * blocks_per_side);
  for (double& v : levels) v = 0.1 + 0.8 * rng.uniform();

  Image img(height, width);
  for (std::size_t i = 0; i < height; ++i) {
    const std::size_t bi = i * blocks_per_side / height;
    for (std::size_t j = 0; j < width; ++j) {
      const std::size_t bj = j * blocks_per_side / width;
      img.at(i, j) = levels[bi * blocks_per_side + bj];
    }
  }
  return img;
}

}  // namespace apdakit::problems
