#include "apdakit/cli/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace apdakit::cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& context) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key))
      throw std::runtime_error("config: unknown key '" + key + "' in " +
                               context);
}

void require_file(const std::string& path, const std::string& what) {
  if (!std::filesystem::exists(path))
    throw std::runtime_error("config: " + what + " '" + path +
                             "' does not exist");
}

ProblemSpec parse_problem(const json& obj) {
  reject_unknown_keys(obj,
                      {"kind", "data", "samples", "dim", "lambda_frac",
                       "image", "height", "width", "keep_ratio", "lambda",
                       "measurements", "density", "corrupt_frac", "dim_y",
                       "mu", "smoothness"},
                      "problem");
  ProblemSpec spec;
  spec.kind = obj.at("kind").get<std::string>();
  static const std::set<std::string> kinds{"logistic", "inpainting",
                                           "phase-retrieval", "quadratic"};
  if (!kinds.contains(spec.kind))
    throw std::runtime_error("config: unknown problem kind '" + spec.kind + "'");

  if (obj.contains("data")) {
    spec.data_path = obj["data"].get<std::string>();
    require_file(spec.data_path, "data file");
  }
  if (obj.contains("image")) {
    spec.image_path = obj["image"].get<std::string>();
    require_file(spec.image_path, "image file");
  }
  if (obj.contains("samples")) spec.samples = obj["samples"].get<std::size_t>();
  if (obj.contains("dim")) spec.dim = obj["dim"].get<std::size_t>();
  if (obj.contains("lambda_frac")) spec.lambda_frac = obj["lambda_frac"].get<double>();
  if (obj.contains("height")) spec.height = obj["height"].get<std::size_t>();
  if (obj.contains("width")) spec.width = obj["width"].get<std::size_t>();
  if (obj.contains("keep_ratio")) spec.keep_ratio = obj["keep_ratio"].get<double>();
  if (obj.contains("lambda")) spec.lambda = obj["lambda"].get<double>();
  if (obj.contains("measurements")) spec.measurements = obj["measurements"].get<std::size_t>();
  if (obj.contains("density")) spec.density = obj["density"].get<double>();
  if (obj.contains("corrupt_frac")) spec.corrupt_frac = obj["corrupt_frac"].get<double>();
  if (obj.contains("dim_y")) spec.dim_y = obj["dim_y"].get<std::size_t>();
  if (obj.contains("mu")) spec.mu = obj["mu"].get<double>();
  if (obj.contains("smoothness")) spec.smoothness = obj["smoothness"].get<double>();
  return spec;
}

SolverSpec parse_solver(const json& obj) {
  reject_unknown_keys(obj,
                      {"name", "beta", "c", "tau_init", "tau", "sigma", "p",
                       "xi", "override_gate", "lipschitz", "max_iters",
                       "residual_tol"},
                      "solver");
  SolverSpec spec;
  spec.name = obj.at("name").get<std::string>();
  static const std::set<std::string> names{"apda", "apda-sc", "cva", "fista"};
  if (!names.contains(spec.name))
    throw std::runtime_error("config: unknown solver '" + spec.name + "'");
  if (obj.contains("beta")) spec.beta = obj["beta"].get<double>();
  if (obj.contains("c")) spec.c = obj["c"].get<double>();
  if (obj.contains("tau_init")) spec.tau_init = obj["tau_init"].get<double>();
  if (obj.contains("tau")) spec.tau = obj["tau"].get<double>();
  if (obj.contains("sigma")) spec.sigma = obj["sigma"].get<double>();
  if (obj.contains("p")) spec.p = obj["p"].get<double>();
  if (obj.contains("xi")) spec.xi = obj["xi"].get<double>();
  if (obj.contains("override_gate")) spec.override_gate = obj["override_gate"].get<bool>();
  if (obj.contains("lipschitz")) spec.lipschitz = obj["lipschitz"].get<double>();
  if (obj.contains("max_iters")) spec.max_iters = obj["max_iters"].get<std::int64_t>();
  if (obj.contains("residual_tol")) spec.residual_tol = obj["residual_tol"].get<double>();
  return spec;
}

SweepSpec parse_sweep(const json& obj) {
  reject_unknown_keys(obj, {"parameter", "min", "max", "count"}, "sweep");
  SweepSpec spec;
  spec.parameter = obj.at("parameter").get<std::string>();
  static const std::set<std::string> params{"beta", "cva-p", "cva-tau"};
  if (!params.contains(spec.parameter))
    throw std::runtime_error("config: unknown sweep parameter '" +
                             spec.parameter + "'");
  spec.min = obj.at("min").get<double>();
  spec.max = obj.at("max").get<double>();
  spec.count = obj.contains("count") ? obj["count"].get<std::size_t>() : 40;
  if (spec.count < 1) throw std::runtime_error("config: sweep count must be >= 1");
  if (!(spec.min > 0.0) || spec.max < spec.min)
    throw std::runtime_error("config: sweep bounds must satisfy 0 < min <= max");
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root = json::parse(json_text);
  reject_unknown_keys(root,
                      {"problem", "solvers", "sweep", "seed", "out_dir",
                       "record_every", "jobs"},
                      "config");
  ExperimentConfig config;
  config.problem = parse_problem(root.at("problem"));

  const json& solvers = root.at("solvers");
  if (!solvers.is_array() || solvers.empty())
    throw std::runtime_error("config: need at least one solver");
  for (const json& s : solvers) config.solvers.push_back(parse_solver(s));

  if (root.contains("sweep")) config.sweep = parse_sweep(root["sweep"]);
  if (root.contains("seed")) config.seed = root["seed"].get<std::uint64_t>();
  if (root.contains("out_dir")) config.out_dir = root["out_dir"].get<std::string>();
  if (root.contains("record_every")) {
    config.record_every = root["record_every"].get<std::int64_t>();
    if (config.record_every < 1)
      throw std::runtime_error("config: record_every must be positive");
  }
  if (root.contains("jobs")) config.jobs = root["jobs"].get<std::size_t>();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::vector<double> sweep_grid(const SweepSpec& sweep) {
  std::vector<double> grid(sweep.count);
  if (sweep.count == 1) {
    grid[0] = sweep.min;
    return grid;
  }
  const double log_min = std::log10(sweep.min);
  const double log_max = std::log10(sweep.max);
  for (std::size_t i = 0; i < sweep.count; ++i)
    grid[i] = std::pow(10.0, log_min + (log_max - log_min) *
                                           static_cast<double>(i) /
                                           static_cast<double>(sweep.count - 1));
  return grid;
}

}  // namespace apdakit::cli
