#pragma once

// Linear operators: the A in min_x max_y <Ax, y> + f(x) - g*(y).
// Operators are immutable after construction; apply/adjoint_apply are
// pure and safe to call concurrently.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace apdakit::linop {

enum class OperatorKind {
  kDense,
  kSparseCsr,
  kIdentity,
  kZero,
  kMask,
  kDiscreteGradient,
  kComposition,
};

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  virtual OperatorKind kind() const = 0;

  // Known exact value or certified upper bound of ||A||, when available.
  virtual std::optional<double> norm_hint() const { return std::nullopt; }

  // out = A x. Throws std::invalid_argument on dimension mismatch.
  void apply(std::span<const double> x, std::span<double> out) const;
  // out = A^T y.
  void adjoint_apply(std::span<const double> y, std::span<double> out) const;

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> adjoint_apply(std::span<const double> y) const;

 protected:
  LinearOperator(std::size_t in_dim, std::size_t out_dim);

  virtual void apply_impl(std::span<const double> x,
                          std::span<double> out) const = 0;
  virtual void adjoint_apply_impl(std::span<const double> y,
                                  std::span<double> out) const = 0;

 private:
  std::size_t in_dim_;
  std::size_t out_dim_;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

// Row-major dense matrix.
class DenseOperator final : public LinearOperator {
 public:
  DenseOperator(std::size_t rows, std::size_t cols, std::vector<double> data,
                std::optional<double> norm_hint = std::nullopt);

  OperatorKind kind() const override { return OperatorKind::kDense; }
  std::optional<double> norm_hint() const override { return hint_; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * in_dim(), in_dim()};
  }
  const std::vector<double>& data() const { return data_; }

 protected:
  void apply_impl(std::span<const double> x,
                  std::span<double> out) const override;
  void adjoint_apply_impl(std::span<const double> y,
                          std::span<double> out) const override;

 private:
  std::vector<double> data_;
  std::optional<double> hint_;
};

// Compressed sparse row matrix.
class CsrOperator final : public LinearOperator {
 public:
  CsrOperator(std::size_t rows, std::size_t cols,
              std::vector<std::size_t> row_ptr,
              std::vector<std::size_t> col_idx, std::vector<double> values);

  OperatorKind kind() const override { return OperatorKind::kSparseCsr; }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t nnz() const { return values_.size(); }

 protected:
  void apply_impl(std::span<const double> x,
                  std::span<double> out) const override;
  void adjoint_apply_impl(std::span<const double> y,
                          std::span<double> out) const override;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(std::size_t dim) : LinearOperator(dim, dim) {}
  OperatorKind kind() const override { return OperatorKind::kIdentity; }
  std::optional<double> norm_hint() const override { return 1.0; }

 protected:
  void apply_impl(std::span<const double> x,
                  std::span<double> out) const override;
  void adjoint_apply_impl(std::span<const double> y,
                          std::span<double> out) const override;
};

class ZeroOperator final : public LinearOperator {
 public:
  ZeroOperator(std::size_t in_dim, std::size_t out_dim)
      : LinearOperator(in_dim, out_dim) {}
  OperatorKind kind() const override { return OperatorKind::kZero; }
  std::optional<double> norm_hint() const override { return 0.0; }

 protected:
  void apply_impl(std::span<const double> x,
                  std::span<double> out) const override;
  void adjoint_apply_impl(std::span<const double> y,
                          std::span<double> out) const override;
};

// Row selection: keeps the listed coordinates, in index order. The
// adjoint scatters back with zeros elsewhere. Indices must be strictly
// increasing and inside [0, in_dim).
class MaskOperator final : public LinearOperator {
 public:
  MaskOperator(std::size_t in_dim, std::vector<std::size_t> kept_indices);

  OperatorKind kind() const override { return OperatorKind::kMask; }
  std::optional<double> norm_hint() const override { return 1.0; }
  const std::vector<std::size_t>& kept_indices() const { return kept_; }

 protected:
  void apply_impl(std::span<const double> x,
                  std::span<double> out) const override;
  void adjoint_apply_impl(std::span<const double> y,
                          std::span<double> out) const override;

 private:
  std::vector<std::size_t> kept_;
};

// 2-D forward-difference gradient with Neumann boundary (the difference
// at the last column / row is 0). Images are row-major height x width;
// the output stacks all horizontal differences first, then all vertical
// differences: out_dim = 2 * height * width. ||D|| <= sqrt(8).
class GradientOperator2D final : public LinearOperator {
 public:
  GradientOperator2D(std::size_t height, std::size_t width);

  OperatorKind kind() const override {
    return OperatorKind::kDiscreteGradient;
  }
  std::optional<double> norm_hint() const override;

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }

 protected:
  void apply_impl(std::span<const double> x,
                  std::span<double> out) const override;
  void adjoint_apply_impl(std::span<const double> y,
                          std::span<double> out) const override;

 private:
  std::size_t height_;
  std::size_t width_;
};

// outer(inner(x)); adjoint applies the transposes in reverse order.
class CompositionOperator final : public LinearOperator {
 public:
  CompositionOperator(OperatorPtr outer, OperatorPtr inner);

  OperatorKind kind() const override { return OperatorKind::kComposition; }
  std::optional<double> norm_hint() const override;

 protected:
  void apply_impl(std::span<const double> x,
                  std::span<double> out) const override;
  void adjoint_apply_impl(std::span<const double> y,
                          std::span<double> out) const override;

 private:
  OperatorPtr outer_;
  OperatorPtr inner_;
};

// Row-major out_dim x in_dim dense image of the operator, built by
// applying it to basis vectors.
std::vector<double> materialize_dense(const LinearOperator& op);

}  // namespace apdakit::linop
