#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "apdakit/common/rng.hpp"
#include "apdakit/io/libsvm.hpp"
#include "apdakit/io/pgm.hpp"
#include "apdakit/io/trace_csv.hpp"
#include "apdakit/problems/generators.hpp"

using namespace apdakit;
using namespace apdakit::io;

TEST_CASE("libsvm parse fixture") {
  std::istringstream in("+1 1:0.5 3:2\n-1 2:1\n");
  const LibsvmData data = parse_libsvm(in);
  CHECK(data.labels == std::vector<double>{1.0, -1.0});
  REQUIRE(data.features->out_dim() == 2);
  REQUIRE(data.features->in_dim() == 3);
  const auto dense = linop::materialize_dense(*data.features);
  CHECK(dense == std::vector<double>{0.5, 0.0, 2.0, 0.0, 1.0, 0.0});
}

TEST_CASE("libsvm rejects non-increasing indices with the line number") {
  std::istringstream in("1 2:1 1:1\n");
  CHECK_THROWS_WITH_AS(parse_libsvm(in),
                       doctest::Contains("indices not increasing at line 1"),
                       std::runtime_error);
}

TEST_CASE("libsvm rejects garbage tokens and empty files") {
  std::istringstream bad_value("1 1:abc\n");
  CHECK_THROWS_WITH_AS(parse_libsvm(bad_value), doctest::Contains("line 1"),
                       std::runtime_error);
  std::istringstream empty("# just a comment\n\n");
  CHECK_THROWS_WITH_AS(parse_libsvm(empty), doctest::Contains("empty"),
                       std::runtime_error);
}

TEST_CASE("libsvm comments and 0/1 label remapping") {
  std::istringstream in("# header\n1 1:2.0 # trailing\n0 2:1.0\n");
  const LibsvmData data = parse_libsvm(in);
  CHECK(data.labels_remapped);
  CHECK(data.labels == std::vector<double>{1.0, -1.0});
}

TEST_CASE("libsvm round trip is bit-identical") {
  const auto matrix = problems::make_sparse_gaussian(12, 7, 0.4, 99);
  Rng rng(100);
  std::vector<double> labels(12);
  for (double& b : labels) b = rng.uniform() < 0.5 ? -1.0 : 1.0;

  std::ostringstream out;
  write_libsvm(out, *matrix, labels);
  std::istringstream in(out.str());
  const LibsvmData parsed = parse_libsvm(in);

  CHECK(parsed.labels == labels);
  CHECK(parsed.features->row_ptr() == matrix->row_ptr());
  CHECK(parsed.features->col_idx() == matrix->col_idx());
  CHECK(parsed.features->values() == matrix->values());
}

TEST_CASE("pgm P2 fixture") {
  std::istringstream in("P2 2 2 255 0 255 255 0");
  const Image img = read_pgm(in);
  CHECK(img.height == 2);
  CHECK(img.width == 2);
  CHECK(img.pixels == std::vector<double>{0.0, 1.0, 1.0, 0.0});
}

TEST_CASE("pgm P5 all-128 fixture") {
  std::string payload = "P5\n3 2\n255\n";
  payload += std::string(6, static_cast<char>(128));
  std::istringstream in(payload);
  const Image img = read_pgm(in);
  for (double p : img.pixels) CHECK(p == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("pgm rejects bad magic and truncated payloads") {
  std::istringstream bad("P3 1 1 255 0");
  CHECK_THROWS_WITH_AS(read_pgm(bad), doctest::Contains("magic"),
                       std::runtime_error);
  std::istringstream truncated("P5 2 2 255 ");
  CHECK_THROWS_WITH_AS(read_pgm(truncated), doctest::Contains("truncated"),
                       std::runtime_error);
}

TEST_CASE("pgm write-read round trip stays within the quantization bound") {
  Rng rng(7);
  Image img(9, 5);
  for (double& p : img.pixels) p = rng.uniform();

  std::ostringstream out;
  write_pgm(out, img);
  std::istringstream in(out.str());
  const Image back = read_pgm(in);

  REQUIRE(back.height == img.height);
  REQUIRE(back.width == img.width);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    CHECK(std::fabs(back.pixels[i] - img.pixels[i]) <= 0.5 / 255.0 + 1e-12);
}

TEST_CASE("pgm 16-bit samples") {
  std::string payload = "P5\n1 1\n65535\n";
  payload.push_back(static_cast<char>(0xff));
  payload.push_back(static_cast<char>(0xff));
  std::istringstream in(payload);
  const Image img = read_pgm(in);
  CHECK(img.pixels[0] == 1.0);
}

TEST_CASE("trace csv schema and empty cells") {
  diag::IterationRecord rec;
  rec.k = 3;
  rec.tau = 0.5;
  rec.f_value = 1.25;
  rec.full_objective = 2.5;
  rec.primal_residual = 0.125;
  rec.wall_time_ns = 42;

  std::ostringstream out;
  write_trace_header(out);
  write_trace_row(out, rec);
  CHECK(out.str() ==
        "k,tau,sigma,theta,L_k,f,F,primal_res,dual_res,energy,wall_time_ns\n"
        "3,0.5,,,,1.25,2.5,0.125,,,42\n");

  rec.sigma = 0.25;
  rec.theta = 1.0;
  rec.lipschitz_estimate = 2.0;
  rec.dual_residual = 0.0625;
  rec.energy = 9.0;
  std::ostringstream full;
  write_trace_row(full, rec);
  CHECK(full.str() == "3,0.5,0.25,1,2,1.25,2.5,0.125,0.0625,9,42\n");
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -2.5e17}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}
