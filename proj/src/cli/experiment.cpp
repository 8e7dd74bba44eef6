#include "apdakit/cli/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "apdakit/common/rng.hpp"
#include "apdakit/diag/certificates.hpp"
#include "apdakit/diag/image_metrics.hpp"
#include "apdakit/io/libsvm.hpp"
#include "apdakit/io/pgm.hpp"
#include "apdakit/io/trace_csv.hpp"
#include "apdakit/linop/norms.hpp"
#include "apdakit/problems/generators.hpp"
#include "apdakit/solvers/apda.hpp"
#include "apdakit/solvers/baselines.hpp"

namespace apdakit::cli {

namespace {

using nlohmann::ordered_json;

std::string sci(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", value);
  return buf;
}

Image load_or_make_image(const ProblemSpec& spec, std::uint64_t seed) {
  if (!spec.image_path.empty()) return io::load_pgm(spec.image_path);
  return problems::make_blocky_image(spec.height, spec.width, 4, seed);
}

}  // namespace

BuiltProblem build_problem(const ProblemSpec& spec, std::uint64_t seed) {
  BuiltProblem built;
  if (spec.kind == "logistic") {
    problems::LogisticData data;
    if (!spec.data_path.empty()) {
      io::LibsvmData file = io::load_libsvm(spec.data_path);
      data.features = std::move(file.features);
      data.labels = std::move(file.labels);
    } else {
      data = problems::generate_synthetic_logistic(spec.samples, spec.dim, seed);
    }
    // global L of the logistic loss: ||Q||^2 / 4
    const double q_norm = linop::operator_norm(*data.features);
    built.lipschitz_global = q_norm * q_norm / 4.0;
    built.problem = problems::make_logistic_problem(
        std::move(data.features), std::move(data.labels), spec.lambda_frac);
    built.x0.assign(built.problem.primal_dim(), 0.0);
    built.y0.assign(built.problem.dual_dim(), 0.0);
  } else if (spec.kind == "inpainting") {
    const Image image = load_or_make_image(spec, seed);
    built.problem = problems::make_inpainting_problem(image, spec.keep_ratio,
                                                      spec.lambda, seed);
    built.lipschitz_global = 1.0;  // ||P^T P|| = 1 for a selection operator
    built.has_image = true;
    built.original_image = image;
    // warm start: the zero-filled masked image P^T b
    const auto& f = static_cast<const problems::MaskedLeastSquaresObjective&>(
        *built.problem.f);
    built.x0 = f.selection().adjoint_apply(f.b());
    built.y0.assign(built.problem.dual_dim(), 0.0);
  } else if (spec.kind == "phase-retrieval") {
    const Image image = load_or_make_image(spec, seed);
    const double d = static_cast<double>(image.size());
    const std::size_t m =
        spec.measurements > 0
            ? spec.measurements
            : static_cast<std::size_t>(std::ceil(d * std::log(d)));
    built.problem = problems::make_phase_retrieval_problem(
        image, m, spec.density, spec.corrupt_frac, spec.lambda, seed);
    built.lipschitz_global = 0.0;  // quartic: no global L
    built.has_image = true;
    built.original_image = image;
    Rng init(seed ^ 0x5deece66dULL);
    built.x0.resize(built.problem.primal_dim());
    built.y0.resize(built.problem.dual_dim());
    for (double& v : built.x0) v = init.normal();
    for (double& v : built.y0) v = init.normal();
  } else if (spec.kind == "quadratic") {
    built.problem = problems::make_quadratic_testproblem(
        spec.dim, spec.dim_y, spec.mu, spec.smoothness, seed);
    built.lipschitz_global = spec.smoothness;
    built.x0.assign(built.problem.primal_dim(), 0.0);
    built.y0.assign(built.problem.dual_dim(), 0.0);
  } else {
    throw std::runtime_error("build_problem: unknown kind '" + spec.kind + "'");
  }
  built.norm_A = built.problem.A->norm_hint()
                     ? *built.problem.A->norm_hint()
                     : linop::operator_norm(*built.problem.A);
  return built;
}

std::size_t resolve_jobs(std::size_t configured) {
  std::size_t jobs = configured > 0 ? configured
                                    : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("APDA_KIT_THREADS")) {
    const long cap = std::atol(env);
    if (cap > 0) jobs = std::min(jobs, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, jobs);
}

namespace {

struct Job {
  std::size_t solver_index = 0;
  SolverSpec solver;
  std::optional<double> sweep_value;
  std::string sweep_param;  // short name used in the file name
  std::string csv_path;
};

struct JobOutcome {
  bool failed = false;
  std::string error;
  std::string stop_reason;
  solvers::TraceSummary summary;
  std::vector<double> x_final;
  double objective_at_final = 0.0;
};

std::string stop_name(solvers::StopReason reason) {
  switch (reason) {
    case solvers::StopReason::kConverged:
      return "converged";
    case solvers::StopReason::kMaxIters:
      return "max_iters";
    case solvers::StopReason::kNonFinite:
      return "non_finite";
  }
  return "?";
}

// thinned CSV emission: keeps k = 1, every record_every-th row and the
// final row
class TraceWriter {
 public:
  TraceWriter(const std::string& path, std::int64_t record_every)
      : out_(path, std::ios::binary), every_(record_every) {
    if (!out_) throw std::runtime_error("cannot open trace file '" + path + "'");
    io::write_trace_header(out_);
  }

  void feed(const diag::IterationRecord& rec) {
    last_ = rec;
    if (rec.k == 1 || rec.k % every_ == 0) {
      io::write_trace_row(out_, rec);
      last_written_k_ = rec.k;
    }
  }

  void finish() {
    if (last_ && last_->k != last_written_k_) io::write_trace_row(out_, *last_);
    out_.flush();
  }

 private:
  std::ofstream out_;
  std::int64_t every_;
  std::optional<diag::IterationRecord> last_;
  std::int64_t last_written_k_ = -1;
};

JobOutcome run_job(const BuiltProblem& built, const Job& job,
                   std::int64_t record_every) {
  JobOutcome outcome;
  try {
    TraceWriter writer(job.csv_path, record_every);
    const auto callback = [&writer](const diag::IterationRecord& rec,
                                    const solvers::SolverView&) {
      writer.feed(rec);
    };

    const SolverSpec& s = job.solver;
    solvers::RunResult result;
    if (s.name == "apda" || s.name == "apda-sc") {
      solvers::ApdaConfig config;
      config.beta = (job.sweep_param == "beta" && job.sweep_value)
                        ? *job.sweep_value
                        : s.beta;
      config.c = s.c;
      config.tau_init = s.tau_init;
      config.variant = s.name == "apda" ? solvers::ApdaVariant::kBase
                                        : solvers::ApdaVariant::kStronglyConvex;
      config.max_iters = s.max_iters;
      config.residual_tol = s.residual_tol;
      config.norm_A = built.norm_A;
      result = solvers::apda_run(built.problem, built.x0, built.y0, config,
                                 callback);
    } else if (s.name == "cva") {
      solvers::CvaConfig config;
      config.lipschitz_global = s.lipschitz > 0.0 ? s.lipschitz
                                                  : built.lipschitz_global;
      config.norm_A = built.norm_A;
      config.max_iters = s.max_iters;
      config.residual_tol = s.residual_tol;
      config.override_validity_gate = s.override_gate;
      if (job.sweep_param == "p" && job.sweep_value) {
        const double p = *job.sweep_value;
        if (config.lipschitz_global <= 0.0)
          throw std::runtime_error(
              "cva p-preset needs a global L; this problem has none");
        config.tau = 1.0 / (built.norm_A / p + config.lipschitz_global);
        config.sigma = 1.0 / (p * built.norm_A);
      } else if (job.sweep_param == "tau" && job.sweep_value) {
        config.tau = *job.sweep_value;
        config.sigma = config.tau * s.xi;
      } else if (s.tau > 0.0 && s.sigma > 0.0) {
        config.tau = s.tau;
        config.sigma = s.sigma;
      } else {
        if (config.lipschitz_global <= 0.0)
          throw std::runtime_error(
              "cva default stepsizes need a global L; set tau/sigma explicitly");
        config.tau = 1.0 / (built.norm_A / s.p + config.lipschitz_global);
        config.sigma = 1.0 / (s.p * built.norm_A);
      }
      result = solvers::cva_run(built.problem, built.x0, built.y0, config,
                                callback);
    } else if (s.name == "fista") {
      solvers::FistaConfig config;
      config.lipschitz_global = s.lipschitz > 0.0 ? s.lipschitz
                                                  : built.lipschitz_global;
      if (config.lipschitz_global <= 0.0)
        throw std::runtime_error("fista needs a global L for this problem");
      config.max_iters = s.max_iters;
      result = solvers::fista_run(*built.problem.f, built.problem.reg,
                                  built.x0, config, callback);
    } else {
      throw std::runtime_error("unknown solver '" + s.name + "'");
    }

    writer.finish();
    outcome.stop_reason = stop_name(result.stop);
    outcome.summary = result.summary;
    outcome.objective_at_final = built.problem.full_objective(result.x);
    outcome.x_final = std::move(result.x);
  } catch (const std::exception& e) {
    outcome.failed = true;
    outcome.error = e.what();
  }
  return outcome;
}

}  // namespace

int run_experiment(const ExperimentConfig& config) {
  const BuiltProblem built = build_problem(config.problem, config.seed);
  std::filesystem::create_directories(config.out_dir);

  // sweep grid (empty = single unswept run per solver)
  std::vector<double> grid;
  std::string short_param;
  if (config.sweep) {
    grid = sweep_grid(*config.sweep);
    if (config.sweep->parameter == "beta") short_param = "beta";
    if (config.sweep->parameter == "cva-p") short_param = "p";
    if (config.sweep->parameter == "cva-tau") short_param = "tau";
  }

  std::map<std::string, int> name_uses;
  for (const SolverSpec& s : config.solvers) ++name_uses[s.name];

  std::vector<Job> jobs;
  for (std::size_t si = 0; si < config.solvers.size(); ++si) {
    const SolverSpec& s = config.solvers[si];
    std::string base = s.name;
    if (name_uses[s.name] > 1) base += "-" + std::to_string(si);
    // sweeps apply to the solvers the parameter belongs to
    const bool swept =
        config.sweep &&
        ((short_param == "beta" && s.name != "cva" && s.name != "fista") ||
         ((short_param == "p" || short_param == "tau") && s.name == "cva"));
    if (swept) {
      for (double value : grid) {
        Job job;
        job.solver_index = si;
        job.solver = s;
        job.sweep_value = value;
        job.sweep_param = short_param;
        job.csv_path = (std::filesystem::path(config.out_dir) /
                        (base + "_" + short_param + "=" + sci(value) + ".csv"))
                           .string();
        jobs.push_back(std::move(job));
      }
    } else {
      Job job;
      job.solver_index = si;
      job.solver = s;
      job.csv_path =
          (std::filesystem::path(config.out_dir) / (base + ".csv")).string();
      jobs.push_back(std::move(job));
    }
  }

  // bounded worker pool; jobs own their output files and share only the
  // immutable problem
  std::vector<JobOutcome> outcomes(jobs.size());
  const std::size_t workers = std::min(resolve_jobs(config.jobs), jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      outcomes[i] = run_job(built, jobs[i], config.record_every);
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // summary
  ordered_json summary;
  summary["problem"] = {{"kind", config.problem.kind},
                        {"seed", config.seed},
                        {"primal_dim", built.problem.primal_dim()},
                        {"dual_dim", built.problem.dual_dim()},
                        {"norm_A", built.norm_A}};
  if (built.lipschitz_global > 0.0)
    summary["problem"]["lipschitz_global"] = built.lipschitz_global;
  if (built.problem.reference) {
    summary["reference"] = {
        {"objective", built.problem.reference->objective},
        {"protocol", built.problem.reference->protocol}};
  }

  bool any_failed = false;
  ordered_json runs = ordered_json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    const JobOutcome& out = outcomes[i];
    ordered_json entry;
    entry["solver"] = job.solver.name;
    if (job.sweep_value) entry[job.sweep_param] = *job.sweep_value;
    entry["csv"] = std::filesystem::path(job.csv_path).filename().string();
    if (out.failed) {
      any_failed = true;
      entry["error"] = out.error;
      entry["partial_output"] = true;
    } else {
      entry["stop"] = out.stop_reason;
      entry["iterations"] = out.summary.iterations;
      entry["final_objective"] = out.objective_at_final;
      entry["final_primal_residual"] = out.summary.final_primal_residual;
      entry["final_dual_residual"] = out.summary.final_dual_residual;
      entry["tau_min"] = out.summary.tau_min;
      entry["tau_max"] = out.summary.tau_max;
      entry["wall_time_ns"] = out.summary.wall_time_ns;
      if (out.stop_reason == "non_finite") any_failed = true;

      if (built.has_image && !out.x_final.empty()) {
        Image reconstruction(built.original_image.height,
                             built.original_image.width);
        reconstruction.pixels = out.x_final;
        entry["psnr"] = diag::psnr(built.original_image, reconstruction, 1.0);
        if (built.original_image.height >= 8 && built.original_image.width >= 8)
          entry["ssim"] = diag::ssim(built.original_image, reconstruction, 1.0);
      }
    }
    runs.push_back(std::move(entry));
  }
  summary["runs"] = std::move(runs);

  // rate-certificate constants for the strongly convex variant on the
  // quadratic instance
  if (config.problem.kind == "quadratic") {
    for (const SolverSpec& s : config.solvers) {
      if (s.name != "apda-sc") continue;
      const double sigma_min = linop::smallest_singular_value(*built.problem.A);
      const diag::RateCertificate cert = diag::make_rate_certificate(
          config.problem.mu, config.problem.smoothness, s.beta, built.norm_A,
          sigma_min);
      summary["certificate"] = {
          {"mu", cert.mu},           {"L", cert.smoothness},
          {"beta", cert.beta},       {"sigma_min", cert.sigma_min},
          {"s", cert.s},             {"t", cert.t},
          {"p", cert.p},             {"q", cert.q},
          {"r", cert.r},             {"contraction", cert.contraction}};
      break;
    }
  }

  std::ofstream summary_out(std::filesystem::path(config.out_dir) /
                            "summary.json");
  summary_out << summary.dump(2) << '\n';

  return any_failed ? 1 : 0;
}

}  // namespace apdakit::cli
