#pragma once

// LIBSVM text format: one sample per line, "<label> <idx>:<val> ...",
// 1-based strictly increasing indices, '#' starts a comment.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "apdakit/linop/linop.hpp"

namespace apdakit::io {

struct LibsvmData {
  std::shared_ptr<const linop::CsrOperator> features;  // m x d
  std::vector<double> labels;
  // set when {0,1} labels were remapped to {-1,+1}
  bool labels_remapped = false;
};

// The feature dimension is the largest index seen. Labels in {0,1} are
// remapped to {-1,+1} with a warning on stderr. Malformed lines are
// reported with their line number.
LibsvmData parse_libsvm(std::istream& in);
LibsvmData load_libsvm(const std::string& path);

void write_libsvm(std::ostream& out, const linop::CsrOperator& features,
                  const std::vector<double>& labels);

}  // namespace apdakit::io
