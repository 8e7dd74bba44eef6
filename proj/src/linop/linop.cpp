#include "apdakit/linop/linop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "apdakit/kernels/kernels.hpp"

namespace apdakit::linop {

namespace {

void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " +
                                std::to_string(got) + ", expected " +
                                std::to_string(want) + ")");
}

}  // namespace

LinearOperator::LinearOperator(std::size_t in_dim, std::size_t out_dim)
    : in_dim_(in_dim), out_dim_(out_dim) {
  if (in_dim == 0 || out_dim == 0)
    throw std::invalid_argument("operator dimensions must be positive");
}

void LinearOperator::apply(std::span<const double> x,
                           std::span<double> out) const {
  check_dim(x.size(), in_dim_, "apply: input");
  check_dim(out.size(), out_dim_, "apply: output");
  apply_impl(x, out);
}

void LinearOperator::adjoint_apply(std::span<const double> y,
                                   std::span<double> out) const {
  check_dim(y.size(), out_dim_, "adjoint_apply: input");
  check_dim(out.size(), in_dim_, "adjoint_apply: output");
  adjoint_apply_impl(y, out);
}

std::vector<double> LinearOperator::apply(std::span<const double> x) const {
  std::vector<double> out(out_dim_);
  apply(x, std::span<double>(out));
  return out;
}

std::vector<double> LinearOperator::adjoint_apply(
    std::span<const double> y) const {
  std::vector<double> out(in_dim_);
  adjoint_apply(y, std::span<double>(out));
  return out;
}

// ---- dense -------------------------------------------------------------

DenseOperator::DenseOperator(std::size_t rows, std::size_t cols,
                             std::vector<double> data,
                             std::optional<double> norm_hint)
    : LinearOperator(cols, rows), data_(std::move(data)), hint_(norm_hint) {
  if (data_.size() != rows * cols)
    throw std::invalid_argument("DenseOperator: data size " +
                                std::to_string(data_.size()) +
                                " != rows*cols = " +
                                std::to_string(rows * cols));
}

void DenseOperator::apply_impl(std::span<const double> x,
                               std::span<double> out) const {
  for (std::size_t i = 0; i < out_dim(); ++i) out[i] = kernels::dot(row(i), x);
}

void DenseOperator::adjoint_apply_impl(std::span<const double> y,
                                       std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < out_dim(); ++i)
    kernels::axpy(y[i], row(i), out);
}

// ---- CSR ----------------------------------------------------------------

CsrOperator::CsrOperator(std::size_t rows, std::size_t cols,
                         std::vector<std::size_t> row_ptr,
                         std::vector<std::size_t> col_idx,
                         std::vector<double> values)
    : LinearOperator(cols, rows),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows + 1)
    throw std::invalid_argument("CsrOperator: row_ptr size mismatch");
  if (col_idx_.size() != values_.size())
    throw std::invalid_argument("CsrOperator: col_idx/values size mismatch");
  if (row_ptr_.front() != 0 || row_ptr_.back() != values_.size())
    throw std::invalid_argument("CsrOperator: malformed row_ptr");
  for (std::size_t r = 0; r < rows; ++r)
    if (row_ptr_[r] > row_ptr_[r + 1])
      throw std::invalid_argument("CsrOperator: row_ptr not monotone");
  for (std::size_t c : col_idx_)
    if (c >= cols) throw std::invalid_argument("CsrOperator: column index out of range");
}

void CsrOperator::apply_impl(std::span<const double> x,
                             std::span<double> out) const {
  for (std::size_t r = 0; r < out_dim(); ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      s += values_[k] * x[col_idx_[k]];
    out[r] = s;
  }
}

void CsrOperator::adjoint_apply_impl(std::span<const double> y,
                                     std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t r = 0; r < out_dim(); ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      out[col_idx_[k]] += values_[k] * yr;
  }
}

// ---- identity / zero -----------------------------------------------------

void IdentityOperator::apply_impl(std::span<const double> x,
                                  std::span<double> out) const {
  std::copy(x.begin(), x.end(), out.begin());
}

void IdentityOperator::adjoint_apply_impl(std::span<const double> y,
                                          std::span<double> out) const {
  std::copy(y.begin(), y.end(), out.begin());
}

void ZeroOperator::apply_impl(std::span<const double>,
                              std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
}

void ZeroOperator::adjoint_apply_impl(std::span<const double>,
                                      std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
}

// ---- mask -----------------------------------------------------------------

MaskOperator::MaskOperator(std::size_t in_dim,
                           std::vector<std::size_t> kept_indices)
    : LinearOperator(in_dim, kept_indices.size()), kept_(std::move(kept_indices)) {
  for (std::size_t t = 0; t < kept_.size(); ++t) {
    if (kept_[t] >= in_dim)
      throw std::invalid_argument("MaskOperator: index " +
                                  std::to_string(kept_[t]) + " out of range");
    if (t > 0 && kept_[t] <= kept_[t - 1])
      throw std::invalid_argument("MaskOperator: indices must be strictly increasing");
  }
}

void MaskOperator::apply_impl(std::span<const double> x,
                              std::span<double> out) const {
  for (std::size_t t = 0; t < kept_.size(); ++t) out[t] = x[kept_[t]];
}

void MaskOperator::adjoint_apply_impl(std::span<const double> y,
                                      std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t t = 0; t < kept_.size(); ++t) out[kept_[t]] = y[t];
}

// ---- 2-D discrete gradient -------------------------------------------------

GradientOperator2D::GradientOperator2D(std::size_t height, std::size_t width)
    : LinearOperator(height * width, 2 * height * width),
      height_(height),
      width_(width) {}

std::optional<double> GradientOperator2D::norm_hint() const {
  return std::sqrt(8.0);
}

void GradientOperator2D::apply_impl(std::span<const double> x,
                                    std::span<double> out) const {
  const std::size_t hw = height_ * width_;
  for (std::size_t i = 0; i < height_; ++i) {
    const std::size_t base = i * width_;
    for (std::size_t j = 0; j + 1 < width_; ++j)
      out[base + j] = x[base + j + 1] - x[base + j];
    out[base + width_ - 1] = 0.0;
  }
  for (std::size_t i = 0; i + 1 < height_; ++i) {
    const std::size_t base = i * width_;
    for (std::size_t j = 0; j < width_; ++j)
      out[hw + base + j] = x[base + width_ + j] - x[base + j];
  }
  for (std::size_t j = 0; j < width_; ++j)
    out[hw + (height_ - 1) * width_ + j] = 0.0;
}

void GradientOperator2D::adjoint_apply_impl(std::span<const double> y,
                                            std::span<double> out) const {
  const std::size_t hw = height_ * width_;
  const auto yh = y.subspan(0, hw);
  const auto yv = y.subspan(hw, hw);
  for (std::size_t i = 0; i < height_; ++i) {
    for (std::size_t j = 0; j < width_; ++j) {
      const std::size_t p = i * width_ + j;
      double v = 0.0;
      if (j > 0) v += yh[p - 1];
      if (j + 1 < width_) v -= yh[p];
      if (i > 0) v += yv[p - width_];
      if (i + 1 < height_) v -= yv[p];
      out[p] = v;
    }
  }
}

// ---- composition ------------------------------------------------------------

CompositionOperator::CompositionOperator(OperatorPtr outer, OperatorPtr inner)
    : LinearOperator(inner ? inner->in_dim() : 0, outer ? outer->out_dim() : 0),
      outer_(std::move(outer)),
      inner_(std::move(inner)) {
  if (inner_->out_dim() != outer_->in_dim())
    throw std::invalid_argument(
        "CompositionOperator: inner out_dim " +
        std::to_string(inner_->out_dim()) + " != outer in_dim " +
        std::to_string(outer_->in_dim()));
}

std::optional<double> CompositionOperator::norm_hint() const {
  const auto a = outer_->norm_hint();
  const auto b = inner_->norm_hint();
  if (a && b) return *a * *b;
  return std::nullopt;
}

void CompositionOperator::apply_impl(std::span<const double> x,
                                     std::span<double> out) const {
  std::vector<double> mid(inner_->out_dim());
  inner_->apply(x, mid);
  outer_->apply(mid, out);
}

void CompositionOperator::adjoint_apply_impl(std::span<const double> y,
                                             std::span<double> out) const {
  std::vector<double> mid(outer_->in_dim());
  outer_->adjoint_apply(y, mid);
  inner_->adjoint_apply(mid, out);
}

// ---- materialization ----------------------------------------------------------

std::vector<double> materialize_dense(const LinearOperator& op) {
  const std::size_t m = op.out_dim();
  const std::size_t n = op.in_dim();
  std::vector<double> dense(m * n);
  std::vector<double> e(n, 0.0);
  std::vector<double> col(m);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) dense[i * n + j] = col[i];
  }
  return dense;
}

}  // namespace apdakit::linop
