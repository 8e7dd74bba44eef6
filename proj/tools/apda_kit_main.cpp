// apda-kit: experiment runner for the adaptive primal-dual toolkit.
//
//   apda-kit run <config.json>      execute the configured solvers
//   apda-kit sweep <config.json>    execute a parameter sweep
//   apda-kit check                  run the invariant self-check suite
//   apda-kit norm <operator-spec>   certified operator norm
//
// Operator specs: identity:N, zero:MxN, grad:HxW, dense:PATH (whitespace
// matrix text), libsvm:PATH.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "apdakit/cli/config.hpp"
#include "apdakit/cli/experiment.hpp"
#include "apdakit/cli/self_check.hpp"
#include "apdakit/io/libsvm.hpp"
#include "apdakit/linop/norms.hpp"

namespace {

using namespace apdakit;

linop::OperatorPtr parse_operator_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("operator spec needs the form kind:args");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);

  auto parse_dims = [&](char sep) {
    const auto x = args.find(sep);
    if (x == std::string::npos)
      throw std::runtime_error("expected <a>" + std::string(1, sep) +
                               "<b> in '" + args + "'");
    return std::pair<std::size_t, std::size_t>{
        std::stoull(args.substr(0, x)), std::stoull(args.substr(x + 1))};
  };

  if (kind == "identity")
    return std::make_shared<linop::IdentityOperator>(std::stoull(args));
  if (kind == "zero") {
    const auto [m, n] = parse_dims('x');
    return std::make_shared<linop::ZeroOperator>(n, m);
  }
  if (kind == "grad") {
    const auto [h, w] = parse_dims('x');
    return std::make_shared<linop::GradientOperator2D>(h, w);
  }
  if (kind == "libsvm") return io::load_libsvm(args).features;
  if (kind == "dense") {
    std::ifstream in(args);
    if (!in) throw std::runtime_error("cannot open '" + args + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::vector<double> row;
      double v;
      while (ls >> v) row.push_back(v);
      if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty dense matrix file");
    const std::size_t cols = rows.front().size();
    std::vector<double> data;
    for (const auto& row : rows) {
      if (row.size() != cols)
        throw std::runtime_error("ragged dense matrix file");
      data.insert(data.end(), row.begin(), row.end());
    }
    return std::make_shared<linop::DenseOperator>(rows.size(), cols, data);
  }
  throw std::runtime_error("unknown operator kind '" + kind + "'");
}

void apply_overrides(cli::ExperimentConfig& config, const CLI::App& cmd) {
  if (const auto* opt = cmd.get_option("--seed"); opt->count() > 0)
    config.seed = opt->as<std::uint64_t>();
  if (const auto* opt = cmd.get_option("--out-dir"); opt->count() > 0)
    config.out_dir = opt->as<std::string>();
  if (const auto* opt = cmd.get_option("--jobs"); opt->count() > 0)
    config.jobs = opt->as<std::size_t>();
  if (const auto* opt = cmd.get_option("--record-every"); opt->count() > 0)
    config.record_every = opt->as<std::int64_t>();
}

void add_override_flags(CLI::App* cmd) {
  cmd->add_option("--seed", "override the config seed");
  cmd->add_option("--out-dir", "override the output directory");
  cmd->add_option("--jobs", "worker pool size (also capped by APDA_KIT_THREADS)");
  cmd->add_option("--record-every", "trace thinning stride");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive primal-dual saddle-point toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string operator_spec;
  std::string fault;

  CLI::App* run = app.add_subcommand("run", "run the configured solvers");
  run->add_option("config", config_path, "experiment config (JSON)")
      ->required();
  add_override_flags(run);

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("config", config_path, "experiment config (JSON)")
      ->required();
  add_override_flags(sweep);

  CLI::App* check = app.add_subcommand("check", "run the invariant self-check");
  check->add_option("--inject-fault", fault,
                    "test hook; 'stepsize-growth-cap' breaks the tau cap");

  CLI::App* norm = app.add_subcommand("norm", "certified operator norm");
  norm->add_option("spec", operator_spec, "operator spec (kind:args)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() || sweep->parsed()) {
      CLI::App* cmd = run->parsed() ? run : sweep;
      cli::ExperimentConfig config = cli::load_config(config_path);
      apply_overrides(config, *cmd);
      if (run->parsed() && config.sweep)
        throw std::runtime_error(
            "config has a sweep block; use the sweep subcommand");
      if (sweep->parsed() && !config.sweep)
        throw std::runtime_error("sweep needs a sweep block in the config");
      return cli::run_experiment(config);
    }
    if (check->parsed()) {
      if (!fault.empty() && fault != "stepsize-growth-cap")
        throw std::runtime_error("unknown fault '" + fault + "'");
      const cli::SelfCheckReport report =
          cli::run_self_check(fault == "stepsize-growth-cap");
      cli::print_report(std::cout, report);
      return report.all_passed() ? 0 : 1;
    }
    if (norm->parsed()) {
      const linop::OperatorPtr op = parse_operator_spec(operator_spec);
      const double value = linop::operator_norm(*op);
      std::cout << "dims: " << op->out_dim() << "x" << op->in_dim() << "\n"
                << "norm: " << value << "\n";
      if (op->in_dim() * op->out_dim() <= std::size_t{4096} * 4096)
        std::cout << "sigma_min: " << linop::smallest_singular_value(*op)
                  << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "apda-kit: %s\n", e.what());
    return 1;
  }
  return 0;
}
