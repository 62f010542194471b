#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "congae/params.hpp"
#include "congae/rng.hpp"

namespace congae {

struct ParamCoord {
  std::size_t param;
  std::size_t index;
};

/// Central-difference check of the analytic gradients held in `params[*].grad`
/// against `loss`, at the given coordinates. Returns the max relative error,
/// |a - n| / max(|a|, |n|, 1e-8). Parameter values are restored afterwards.
double finite_diff_check(const std::function<double(const ModelParams&)>& loss,
                         ModelParams& params, double h, std::span<const ParamCoord> coords);

/// Up to `per_param` random coordinates from every parameter.
std::vector<ParamCoord> sample_coords(const ModelParams& params, std::size_t per_param,
                                      RngStream& rng);

}  // namespace congae
