#include "apdakit/io/libsvm.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace apdakit::io {

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("libsvm: " + what + " at line " +
                           std::to_string(line_no));
}

double parse_real(const char* begin, const char* end, std::size_t line_no,
                  const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    fail(line_no, std::string("unparseable ") + what + " '" +
                      std::string(begin, end) + "'");
  return value;
}

}  // namespace

LibsvmData parse_libsvm(std::istream& in) {
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  std::vector<double> labels;
  std::size_t max_index = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);

    std::size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
        ++pos;
    };
    auto take_token = [&]() -> std::string_view {
      skip_ws();
      const std::size_t start = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos])))
        ++pos;
      return std::string_view(line).substr(start, pos - start);
    };

    const std::string_view label_tok = take_token();
    if (label_tok.empty()) continue;  // blank or comment-only line

    // a leading '+' is conventional in these files; from_chars rejects it
    std::string_view lt = label_tok;
    if (!lt.empty() && lt.front() == '+') lt.remove_prefix(1);
    labels.push_back(parse_real(lt.data(), lt.data() + lt.size(), line_no, "label"));

    std::size_t prev_index = 0;
    for (;;) {
      const std::string_view tok = take_token();
      if (tok.empty()) break;
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos)
        fail(line_no, "feature token '" + std::string(tok) + "' has no ':'");
      std::size_t index = 0;
      const auto [iptr, iec] =
          std::from_chars(tok.data(), tok.data() + colon, index);
      if (iec != std::errc() || iptr != tok.data() + colon || index == 0)
        fail(line_no, "bad feature index '" + std::string(tok.substr(0, colon)) + "'");
      if (index <= prev_index) fail(line_no, "indices not increasing");
      prev_index = index;
      max_index = std::max(max_index, index);
      const std::string_view val = tok.substr(colon + 1);
      values.push_back(parse_real(val.data(), val.data() + val.size(), line_no, "value"));
      col_idx.push_back(index - 1);  // to 0-based
    }
    row_ptr.push_back(values.size());
  }

  if (labels.empty()) throw std::runtime_error("libsvm: empty file");
  if (max_index == 0) throw std::runtime_error("libsvm: no features seen");

  LibsvmData data;
  bool zero_one = true;
  bool pm_one = true;
  for (double b : labels) {
    if (b != 0.0 && b != 1.0) zero_one = false;
    if (b != -1.0 && b != 1.0) pm_one = false;
  }
  if (!pm_one && zero_one) {
    std::fprintf(stderr, "[apdakit] warning: libsvm labels {0,1} remapped to {-1,+1}\n");
    for (double& b : labels) b = b == 0.0 ? -1.0 : 1.0;
    data.labels_remapped = true;
  }

  data.features = std::make_shared<linop::CsrOperator>(
      labels.size(), max_index, std::move(row_ptr), std::move(col_idx),
      std::move(values));
  data.labels = std::move(labels);
  return data;
}

LibsvmData load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("libsvm: cannot open '" + path + "'");
  return parse_libsvm(in);
}

void write_libsvm(std::ostream& out, const linop::CsrOperator& features,
                  const std::vector<double>& labels) {
  if (labels.size() != features.out_dim())
    throw std::invalid_argument("write_libsvm: label count mismatch");
  char buf[64];
  for (std::size_t r = 0; r < features.out_dim(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", labels[r]);
    out << buf;
    for (std::size_t k = features.row_ptr()[r]; k < features.row_ptr()[r + 1];
         ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", features.values()[k]);
      out << ' ' << (features.col_idx()[k] + 1) << ':' << buf;
    }
    out << '\n';
  }
}

}  // namespace apdakit::io
