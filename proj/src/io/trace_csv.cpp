#include "apdakit/io/trace_csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace apdakit::io {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

void write_trace_header(std::ostream& out) { out << kTraceCsvHeader << '\n'; }

void write_trace_row(std::ostream& out, const diag::IterationRecord& rec) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  out << rec.k << ',' << format_double(rec.tau) << ',' << opt(rec.sigma) << ','
      << opt(rec.theta) << ',' << opt(rec.lipschitz_estimate) << ','
      << format_double(rec.f_value) << ',' << format_double(rec.full_objective)
      << ',' << format_double(rec.primal_residual) << ','
      << opt(rec.dual_residual) << ',' << opt(rec.energy) << ','
      << rec.wall_time_ns << '\n';
}

}  // namespace apdakit::io
