#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace congae {

/// Dense row-major matrix of doubles. Vectors are carried as std::vector<double>.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool same_shape(const Matrix& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  void fill(double v);
  bool all_finite() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Kernels used by the forward/backward passes. All accumulate in a fixed
// loop order so results are reproducible bit-for-bit.

/// y = A x
std::vector<double> matvec(const Matrix& a, std::span<const double> x);
/// y += A^T g
void matvec_transposed_add(const Matrix& a, std::span<const double> g, std::span<double> y);
/// A += g x^T
void outer_add(Matrix& a, std::span<const double> g, std::span<const double> x);

/// C = X W^T, X: n x k, W: m x k.
Matrix matmul_nt(const Matrix& x, const Matrix& w);
/// C = G W, G: n x m, W: m x k.
Matrix matmul_nn(const Matrix& g, const Matrix& w);
/// D += G^T X, G: n x m, X: n x k, D: m x k.
void matmul_tn_add(Matrix& d, const Matrix& g, const Matrix& x);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> x);

/// Concatenate vectors in order.
std::vector<double> concat(std::initializer_list<std::span<const double>> parts);

}  // namespace congae
