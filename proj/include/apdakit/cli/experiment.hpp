#pragma once

// Experiment orchestration: builds the configured problem, runs each
// solver (x sweep point) as an independent job on a bounded worker pool,
// writes one CSV trace per run plus a JSON summary.

#include <cstdint>
#include <string>

#include "apdakit/cli/config.hpp"
#include "apdakit/common/image.hpp"
#include "apdakit/problems/saddle_problem.hpp"

namespace apdakit::cli {

struct BuiltProblem {
  problems::SaddleProblem problem;
  std::vector<double> x0;
  std::vector<double> y0;
  double norm_A = 0.0;             // certified
  double lipschitz_global = 0.0;   // 0 when no global L exists
  // inpainting extras for reconstruction reporting
  bool has_image = false;
  Image original_image;
};

BuiltProblem build_problem(const ProblemSpec& spec, std::uint64_t seed);

// Returns the process exit code (0 = every run succeeded). Writes
// <out_dir>/<solver>[_<param>=<value>].csv and <out_dir>/summary.json.
int run_experiment(const ExperimentConfig& config);

// worker pool size: explicit config, else hardware concurrency, both
// capped by the APDA_KIT_THREADS environment variable
std::size_t resolve_jobs(std::size_t configured);

}  // namespace apdakit::cli
