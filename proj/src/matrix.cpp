#include "congae/matrix.hpp"

#include <cmath>

#include "congae/error.hpp"

namespace congae {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_dims(data_.size() == rows_ * cols_, "matrix payload does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::fill(double v) {
  for (auto& x : data_) x = v;
}

bool Matrix::all_finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  require_dims(a.cols() == x.size(), "matvec: matrix has " + std::to_string(a.cols()) +
                                         " columns, vector has " + std::to_string(x.size()));
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot(a.row(r), x);
  return y;
}

void matvec_transposed_add(const Matrix& a, std::span<const double> g, std::span<double> y) {
  require_dims(a.rows() == g.size() && a.cols() == y.size(), "matvec_transposed_add shape");
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    auto row = a.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) y[c] += gr * row[c];
  }
}

void outer_add(Matrix& a, std::span<const double> g, std::span<const double> x) {
  require_dims(a.rows() == g.size() && a.cols() == x.size(), "outer_add shape");
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    auto row = a.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += gr * x[c];
  }
}

Matrix matmul_nt(const Matrix& x, const Matrix& w) {
  require_dims(x.cols() == w.cols(), "matmul_nt inner dimension");
  Matrix c(x.rows(), w.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto xi = x.row(i);
    for (std::size_t j = 0; j < w.rows(); ++j) c(i, j) = dot(xi, w.row(j));
  }
  return c;
}

Matrix matmul_nn(const Matrix& g, const Matrix& w) {
  require_dims(g.cols() == w.rows(), "matmul_nn inner dimension");
  Matrix c(g.rows(), w.cols());
  for (std::size_t i = 0; i < g.rows(); ++i) matvec_transposed_add(w, g.row(i), c.row(i));
  return c;
}

void matmul_tn_add(Matrix& d, const Matrix& g, const Matrix& x) {
  require_dims(g.rows() == x.rows() && d.rows() == g.cols() && d.cols() == x.cols(),
               "matmul_tn_add shape");
  for (std::size_t i = 0; i < g.rows(); ++i) outer_add(d, g.row(i), x.row(i));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

std::vector<double> concat(std::initializer_list<std::span<const double>> parts) {
  std::size_t n = 0;
  for (auto p : parts) n += p.size();
  std::vector<double> out;
  out.reserve(n);
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace congae
