#include "congae/ops.hpp"

#include <cmath>

#include "congae/error.hpp"

namespace congae {

std::vector<double> linear(const Param& u, std::span<const double> x) {
  require_dims(u.value.cols() == x.size(), "linear '" + u.name + "' expects input of length " +
                                               std::to_string(u.value.cols()) + ", got " +
                                               std::to_string(x.size()));
  return matvec(u.value, x);
}

std::vector<double> affine(const Param& u, std::span<const double> bias, std::span<const double> x) {
  auto y = linear(u, x);
  if (bias.empty()) return y;
  require_dims(bias.size() == y.size(), "bias of '" + u.name + "' has the wrong length");
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += bias[i];
  return y;
}

std::vector<double> relu(std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  for (auto& v : y) v = v > 0.0 ? v : 0.0;
  return y;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> sigmoid(std::span<const double> x) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = sigmoid(x[i]);
  return y;
}

std::vector<double> l2_normalize(std::span<const double> x, double eps) {
  const double n = l2_norm(x);
  std::vector<double> y(x.begin(), x.end());
  if (n == 0.0) return y;
  const double d = std::max(n, eps);
  for (auto& v : y) v /= d;
  return y;
}

std::vector<double> l2_normalize_backward(std::span<const double> x, std::span<const double> g,
                                          double eps) {
  const double n = l2_norm(x);
  std::vector<double> dx(g.begin(), g.end());
  if (n == 0.0) return dx;
  if (n < eps) {
    for (auto& v : dx) v /= eps;
    return dx;
  }
  // d(x/n) = (I - y y^T) g / n with y = x/n
  double yg = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) yg += x[i] * g[i];
  yg /= n;
  for (std::size_t i = 0; i < x.size(); ++i) dx[i] = (g[i] - (x[i] / n) * yg) / n;
  return dx;
}

std::vector<double> dropout_mask(std::size_t n, double p, RngStream& rng, bool training) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("dropout probability must lie in [0, 1)");
  std::vector<double> mask(n, 1.0);
  if (!training || p == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - p);
  for (auto& m : mask) m = rng.uniform() < p ? 0.0 : keep_scale;
  return mask;
}

std::vector<double> dropout(std::span<const double> x, double p, RngStream& rng, bool training) {
  auto mask = dropout_mask(x.size(), p, rng, training);
  for (std::size_t i = 0; i < x.size(); ++i) mask[i] *= x[i];
  return mask;
}

}  // namespace congae
