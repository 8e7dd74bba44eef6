#pragma once

// CSV trace emission. The column set is fixed; absent values are empty
// cells. Numbers print in shortest round-trip form so identical runs
// produce byte-identical files.

#include <iosfwd>
#include <string>

#include "apdakit/diag/record.hpp"

namespace apdakit::io {

inline constexpr const char* kTraceCsvHeader =
    "k,tau,sigma,theta,L_k,f,F,primal_res,dual_res,energy,wall_time_ns";

void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const diag::IterationRecord& rec);

// shortest round-trip decimal form of a double (the CSV number format)
std::string format_double(double value);

}  // namespace apdakit::io
