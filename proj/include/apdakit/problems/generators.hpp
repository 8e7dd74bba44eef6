#pragma once

// Problem assembly for the three experiment families plus synthetic
// generators with known structure. All generators are deterministic
// given the seed.

#include <cstdint>
#include <memory>
#include <vector>

#include "apdakit/common/image.hpp"
#include "apdakit/problems/saddle_problem.hpp"

namespace apdakit::problems {

struct LogisticData {
  std::shared_ptr<const linop::CsrOperator> features;  // m x d
  std::vector<double> labels;                          // in {-1, +1}
};

// Dense Gaussian design with a sparse planted weight vector; labels are
// the signs of the noisy margins.
LogisticData generate_synthetic_logistic(std::size_t num_samples,
                                         std::size_t dim,
                                         std::uint64_t seed);

// l1-regularized logistic regression with lambda =
// lambda_frac * ||Q^T b||_inf and A = identity.
SaddleProblem make_logistic_problem(
    std::shared_ptr<const linop::CsrOperator> features,
    std::vector<double> labels, double lambda_frac);

// TV inpainting: masked least squares on ceil(keep_ratio * h * w)
// uniformly sampled pixels, discrete gradient coupling, group-l2-1
// regularizer of weight lambda.
SaddleProblem make_inpainting_problem(const Image& image, double keep_ratio,
                                      double lambda, std::uint64_t seed);

// TV-regularized phase retrieval from sparse Gaussian measurements
// b_i = <A_i, X>^2 with a corrupt_frac subset of b zeroed. Nonconvex;
// solvers treat it heuristically.
SaddleProblem make_phase_retrieval_problem(const Image& image,
                                           std::size_t num_measurements,
                                           double density,
                                           double corrupt_frac, double lambda,
                                           std::uint64_t seed);

// Strongly convex quadratic with spectrum exactly [mu, L], a full-row-rank
// dense coupling A (dim_y <= dim_x) and a small l1 term. The reference
// saddle point is produced by a long fixed-stepsize baseline run gated at
// reference_residual_gate and stored on the problem.
SaddleProblem make_quadratic_testproblem(std::size_t dim_x, std::size_t dim_y,
                                         double mu, double smoothness,
                                         std::uint64_t seed,
                                         std::int64_t reference_max_iters = 200000,
                                         double reference_residual_gate = 1e-10);

// Piecewise-constant image (a grid of constant blocks), the natural
// TV-friendly test pattern.
Image make_blocky_image(std::size_t height, std::size_t width,
                        std::size_t blocks_per_side, std::uint64_t seed);

// Sparse Gaussian matrix in CSR form: each entry is nonzero with the
// given density, values standard normal.
std::shared_ptr<const linop::CsrOperator> make_sparse_gaussian(
    std::size_t rows, std::size_t cols, double density, std::uint64_t seed);

}  // namespace apdakit::problems
