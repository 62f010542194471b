#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "congae/matrix.hpp"
#include "congae/rng.hpp"

namespace congae {

struct Param {
  std::string name;
  Matrix value;
  Matrix grad;
};

/// Ordered store of named trainable tensors with gradient slots.
class ModelParams {
 public:
  /// Registers a parameter; names must be unique.
  std::size_t add(std::string name, Matrix value);

  std::size_t size() const noexcept { return params_.size(); }
  Param& operator[](std::size_t i) { return params_[i]; }
  const Param& operator[](std::size_t i) const { return params_[i]; }
  std::optional<std::size_t> find(const std::string& name) const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad();
  std::size_t scalar_count() const;
  /// Copies values from `other`; names and shapes must match exactly.
  void assign_values(const ModelParams& other);
  bool values_equal(const ModelParams& other) const;

 private:
  std::vector<Param> params_;
};

/// Gradient storage detached from a ModelParams, used for per-sample
/// accumulation before a deterministic reduction.
class GradientBuffer {
 public:
  GradientBuffer() = default;
  explicit GradientBuffer(const ModelParams& like);

  Matrix& operator[](std::size_t i) { return grads_[i]; }
  const Matrix& operator[](std::size_t i) const { return grads_[i]; }
  std::size_t size() const noexcept { return grads_.size(); }

  void zero();
  /// params[i].grad += scale * this[i]
  void add_to(ModelParams& params, double scale = 1.0) const;

 private:
  std::vector<Matrix> grads_;
};

/// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
void init_glorot_uniform(Matrix& m, RngStream& rng);
void init_normal(Matrix& m, RngStream& rng, double stddev = 1.0);

}  // namespace congae
