#include "congae/params.hpp"

#include <cmath>

#include "congae/error.hpp"

namespace congae {

std::size_t ModelParams::add(std::string name, Matrix value) {
  if (find(name)) throw ConfigError("duplicate parameter name '" + name + "'");
  Matrix grad(value.rows(), value.cols());
  params_.push_back({std::move(name), std::move(value), std::move(grad)});
  return params_.size() - 1;
}

std::optional<std::size_t> ModelParams::find(const std::string& name) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return i;
  return std::nullopt;
}

void ModelParams::zero_grad() {
  for (auto& p : params_) p.grad.fill(0.0);
}

std::size_t ModelParams::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

void ModelParams::assign_values(const ModelParams& other) {
  require_dims(other.size() == size(), "parameter count mismatch");
  for (std::size_t i = 0; i < size(); ++i) {
    if (other[i].name != params_[i].name)
      throw DimensionError("parameter '" + params_[i].name + "' does not match '" +
                           other[i].name + "'");
    if (!other[i].value.same_shape(params_[i].value))
      throw DimensionError("parameter '" + params_[i].name + "' has shape " +
                           std::to_string(params_[i].value.rows()) + "x" +
                           std::to_string(params_[i].value.cols()) + ", source has " +
                           std::to_string(other[i].value.rows()) + "x" +
                           std::to_string(other[i].value.cols()));
    params_[i].value = other[i].value;
  }
}

bool ModelParams::values_equal(const ModelParams& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (other[i].name != params_[i].name || !(other[i].value == params_[i].value)) return false;
  return true;
}

GradientBuffer::GradientBuffer(const ModelParams& like) {
  grads_.reserve(like.size());
  for (const auto& p : like) grads_.emplace_back(p.value.rows(), p.value.cols());
}

void GradientBuffer::zero() {
  for (auto& g : grads_) g.fill(0.0);
}

void GradientBuffer::add_to(ModelParams& params, double scale) const {
  require_dims(params.size() == grads_.size(), "gradient buffer does not match parameters");
  for (std::size_t i = 0; i < grads_.size(); ++i) {
    auto dst = params[i].grad.flat();
    auto src = grads_[i].flat();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] += scale * src[k];
  }
}

void init_glorot_uniform(Matrix& m, RngStream& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (auto& v : m.flat()) v = rng.uniform(-a, a);
}

void init_normal(Matrix& m, RngStream& rng, double stddev) {
  for (auto& v : m.flat()) v = rng.normal(0.0, stddev);
}

}  // namespace congae
