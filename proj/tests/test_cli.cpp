#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "apdakit/cli/config.hpp"
#include "apdakit/cli/experiment.hpp"
#include "apdakit/cli/self_check.hpp"

using namespace apdakit;
using namespace apdakit::cli;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// drop the wall_time_ns column (the last one) from every CSV line
std::string strip_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.rfind(',');
    out << line.substr(0, cut) << '\n';
  }
  return out.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing happy path") {
  const ExperimentConfig config = parse_config(R"({
    "problem": {"kind": "quadratic", "dim": 8, "dim_y": 3, "mu": 0.5, "smoothness": 4.0},
    "solvers": [
      {"name": "apda", "beta": 2.0, "max_iters": 50},
      {"name": "cva", "max_iters": 50}
    ],
    "seed": 9,
    "out_dir": "somewhere",
    "record_every": 5
  })");
  CHECK(config.problem.kind == "quadratic");
  CHECK(config.solvers.size() == 2);
  CHECK(config.solvers[0].beta == 2.0);
  CHECK(config.seed == 9);
  CHECK(config.record_every == 5);
}

TEST_CASE("config rejects unknown keys, kinds and empty solver lists") {
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"problem": {"kind": "quadratic"}, "solvers": [], "typo": 1})"),
      doctest::Contains("unknown key"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"problem": {"kind": "sudoku"}, "solvers": [{"name": "apda"}]})"),
      doctest::Contains("unknown problem kind"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"problem": {"kind": "quadratic"}, "solvers": []})"),
      doctest::Contains("at least one solver"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"problem": {"kind": "logistic", "data": "/nonexistent/x"},
                       "solvers": [{"name": "apda"}]})"),
      doctest::Contains("does not exist"), std::runtime_error);
}

TEST_CASE("sweep grid is log-spaced inclusive") {
  SweepSpec sweep;
  sweep.parameter = "beta";
  sweep.min = 1e-2;
  sweep.max = 1e2;
  sweep.count = 5;
  const auto grid = sweep_grid(sweep);
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == doctest::Approx(1e-2));
  CHECK(grid[2] == doctest::Approx(1.0));
  CHECK(grid.back() == doctest::Approx(1e2));
}

TEST_CASE("run_experiment is deterministic modulo wall time") {
  TempDir dir_a("apdakit_test_run_a");
  TempDir dir_b("apdakit_test_run_b");

  ExperimentConfig config = parse_config(R"({
    "problem": {"kind": "logistic", "samples": 40, "dim": 12},
    "solvers": [
      {"name": "apda", "beta": 10.0, "max_iters": 200},
      {"name": "fista", "max_iters": 200}
    ],
    "seed": 4
  })");
  config.out_dir = dir_a.path.string();
  REQUIRE(run_experiment(config) == 0);
  config.out_dir = dir_b.path.string();
  REQUIRE(run_experiment(config) == 0);

  for (const char* name : {"apda.csv", "fista.csv"}) {
    const std::string a = read_file(dir_a.path / name);
    const std::string b = read_file(dir_b.path / name);
    CHECK(strip_wall_time(a) == strip_wall_time(b));
  }
  CHECK(fs::exists(dir_a.path / "summary.json"));
}

TEST_CASE("sweep names files with the parameter value") {
  TempDir dir("apdakit_test_sweep");
  ExperimentConfig config = parse_config(R"({
    "problem": {"kind": "quadratic", "dim": 6, "dim_y": 2},
    "solvers": [{"name": "apda", "max_iters": 40}],
    "sweep": {"parameter": "beta", "min": 1e-2, "max": 1e2, "count": 5},
    "seed": 2
  })");
  config.out_dir = dir.path.string();
  REQUIRE(run_experiment(config) == 0);

  std::size_t csvs = 0;
  bool found_example = false;
  for (const auto& entry : fs::directory_iterator(dir.path)) {
    if (entry.path().extension() == ".csv") {
      ++csvs;
      if (entry.path().filename() == "apda_beta=1.000000e-02.csv")
        found_example = true;
    }
  }
  CHECK(csvs == 5);
  CHECK(found_example);
}

TEST_CASE("cva gate failure yields a nonzero exit and a recorded error") {
  TempDir dir("apdakit_test_gate");
  ExperimentConfig config = parse_config(R"({
    "problem": {"kind": "quadratic", "dim": 6, "dim_y": 2},
    "solvers": [{"name": "cva", "tau": 10.0, "sigma": 10.0, "max_iters": 10}],
    "seed": 3
  })");
  config.out_dir = dir.path.string();
  CHECK(run_experiment(config) == 1);
  const std::string summary = read_file(dir.path / "summary.json");
  CHECK(summary.find("validity condition") != std::string::npos);
}

TEST_CASE("record_every thins the trace but keeps first and last rows") {
  TempDir dir("apdakit_test_thin");
  ExperimentConfig config = parse_config(R"({
    "problem": {"kind": "quadratic", "dim": 6, "dim_y": 2},
    "solvers": [{"name": "apda", "max_iters": 103}],
    "seed": 5,
    "record_every": 10
  })");
  config.out_dir = dir.path.string();
  REQUIRE(run_experiment(config) == 0);

  std::istringstream in(read_file(dir.path / "apda.csv"));
  std::string line;
  std::getline(in, line);  // header
  std::vector<long> ks;
  while (std::getline(in, line)) ks.push_back(std::stol(line));
  REQUIRE(!ks.empty());
  CHECK(ks.front() == 1);
  CHECK(ks.back() == 103);
  for (std::size_t i = 1; i + 1 < ks.size(); ++i) CHECK(ks[i] % 10 == 0);
}

TEST_CASE("logistic problems load from a LIBSVM file through the config") {
  TempDir dir("apdakit_test_libsvm_cfg");
  const fs::path data = dir.path / "tiny.libsvm";
  {
    std::ofstream out(data);
    out << "+1 1:0.5 3:2\n-1 2:1\n+1 1:-1 2:0.25\n-1 3:0.75\n";
  }
  ExperimentConfig config = parse_config(R"({
    "problem": {"kind": "logistic", "data": ")" + data.string() + R"("},
    "solvers": [{"name": "apda", "beta": 1.0, "max_iters": 50}],
    "seed": 1
  })");
  config.out_dir = (dir.path / "out").string();
  CHECK(run_experiment(config) == 0);
  CHECK(fs::exists(dir.path / "out" / "apda.csv"));

  const BuiltProblem built = build_problem(config.problem, 1);
  CHECK(built.problem.primal_dim() == 3);
}

TEST_CASE("duplicate solver names get distinct trace files") {
  TempDir dir("apdakit_test_dup");
  ExperimentConfig config = parse_config(R"({
    "problem": {"kind": "quadratic", "dim": 6, "dim_y": 2},
    "solvers": [{"name": "apda", "beta": 0.5, "max_iters": 30},
                 {"name": "apda", "beta": 2.0, "max_iters": 30}],
    "seed": 6
  })");
  config.out_dir = dir.path.string();
  REQUIRE(run_experiment(config) == 0);
  CHECK(fs::exists(dir.path / "apda-0.csv"));
  CHECK(fs::exists(dir.path / "apda-1.csv"));
}

TEST_CASE("self check passes clean and fails under fault injection") {
  const SelfCheckReport clean = run_self_check(false);
  for (const auto& group : clean.groups) {
    CAPTURE(group.name);
    CAPTURE(group.detail);
    CHECK(group.passed);
  }
  CHECK(clean.all_passed());

  const SelfCheckReport faulty = run_self_check(true);
  CHECK_FALSE(faulty.all_passed());
  bool stepsize_failed = false;
  for (const auto& group : faulty.groups)
    if (group.name == "stepsize-invariants" && !group.passed)
      stepsize_failed = true;
  CHECK(stepsize_failed);

  std::ostringstream out;
  print_report(out, faulty);
  CHECK(out.str().find("[FAIL] stepsize-invariants") != std::string::npos);
}

TEST_CASE("resolve_jobs respects the environment cap") {
  setenv("APDA_KIT_THREADS", "2", 1);
  CHECK(resolve_jobs(8) == 2);
  CHECK(resolve_jobs(1) == 1);
  unsetenv("APDA_KIT_THREADS");
  CHECK(resolve_jobs(8) == 8);
}
