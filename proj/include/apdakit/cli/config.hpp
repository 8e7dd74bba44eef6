#pragma once

// Experiment configuration (JSON). The exact key set is documented in
// the README; unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace apdakit::cli {

struct ProblemSpec {
  std::string kind;  // logistic | inpainting | phase-retrieval | quadratic

  // logistic: either a LIBSVM file or a synthetic m x d design
  std::string data_path;
  std::size_t samples = 200;
  std::size_t dim = 50;
  double lambda_frac = 0.005;

  // imaging problems: either a PGM file or a synthetic blocky image
  std::string image_path;
  std::size_t height = 32;
  std::size_t width = 32;
  double keep_ratio = 0.4;
  double lambda = 1e-2;
  std::size_t measurements = 0;  // 0 = ceil(d log d)
  double density = 0.3;
  double corrupt_frac = 0.1;

  // quadratic certificate instance
  std::size_t dim_y = 4;
  double mu = 0.5;
  double smoothness = 5.0;
};

struct SolverSpec {
  std::string name;  // apda | apda-sc | cva | fista

  // apda / apda-sc
  double beta = 1.0;
  double c = 1e-15;
  double tau_init = 1e-9;

  // cva: explicit stepsizes, or tau = 1/(||A||/p + L), sigma = 1/(p ||A||)
  // when both are 0; xi sets sigma = tau * xi in the tau-sweep preset
  double tau = 0.0;
  double sigma = 0.0;
  double p = 1.0;
  double xi = 1.0;
  bool override_gate = false;

  // fista; 0 = derive from the problem
  double lipschitz = 0.0;

  std::int64_t max_iters = 1000;
  double residual_tol = 0.0;
};

struct SweepSpec {
  // "beta" (apda), "cva-p" (preset 1), "cva-tau" (preset 2, sigma = tau*xi)
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<SolverSpec> solvers;
  std::optional<SweepSpec> sweep;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::int64_t record_every = 1;
  std::size_t jobs = 0;  // 0 = hardware concurrency (capped by APDA_KIT_THREADS)
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// log-spaced grid over [min, max]; count 1 gives {min}
std::vector<double> sweep_grid(const SweepSpec& sweep);

}  // namespace apdakit::cli
