#pragma once

#include <cstdint>
#include <vector>

#include "congae/matrix.hpp"
#include "congae/params.hpp"

namespace congae {

struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::uint64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double learning_rate = 1e-3;

  static AdamState for_params(const ModelParams& params, double learning_rate,
                              double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);

  bool operator==(const AdamState&) const = default;
};

/// One bias-corrected Adam update from the gradients in `params`, then zeroes
/// the gradients. Throws NumericError naming the first parameter whose
/// gradient is not finite (no parameter is touched in that case).
void adam_step(ModelParams& params, AdamState& state);

}  // namespace congae
